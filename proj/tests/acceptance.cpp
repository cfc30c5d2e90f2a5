// Copyright 2026 The spokendst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "spokendst/spokendst.hpp"

namespace {

using namespace spokendst;
namespace fs = std::filesystem;

const fs::path kFixtures = SPOKENDST_FIXTURES;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const PhoneticResources& phonetics() {
  static const PhoneticResources r = PhoneticResources::load_default();
  return r;
}

const BeliefState& row1_gold() {
  static const auto s =
      testutil::state({{"taxi-departure", "stevanage"}, {"taxi-destination", "museum"}, {"taxi-bookpeople", "1"}});
  return s;
}
const BeliefState& row1_pred() {
  static const auto s = testutil::state({{"taxi-departure", "stevanase"}, {"taxi-destination", "museum"}});
  return s;
}
const BeliefState& row2_gold() {
  static const auto s = testutil::state({{"restaurant-name", "golden wok"}});
  return s;
}
const BeliefState& row2_pred() {
  static const auto s = testutil::state({{"restaurant-name", "gordon wok"}});
  return s;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome worked_row1_exact() {
  const auto c = exact_match_counts(row1_gold(), row1_pred());
  const double f1 = f1_from_counts(c).f1;
  return {f1 == 0.4 && c.common == 1 && c.pred_total == 2 && c.gold_total == 3,
          fmt("F1=%.4f tp=%zu |pred|=%zu |gold|=%zu", f1, c.common, c.pred_total, c.gold_total)};
}

Outcome worked_row2_exact() {
  const double f1 = f1_from_counts(exact_match_counts(row2_gold(), row2_pred())).f1;
  return {f1 == 0.0, fmt("F1=%.4f", f1)};
}

Outcome worked_phoneme() {
  const double e1 = f1_from_counts(exact_match_counts(row1_gold(), row1_pred())).f1;
  const double e2 = f1_from_counts(exact_match_counts(row2_gold(), row2_pred())).f1;
  const double p1 = f1_from_counts(phoneme_match_counts(row1_gold(), row1_pred(), phonetics())).f1;
  const double p2 = f1_from_counts(phoneme_match_counts(row2_gold(), row2_pred(), phonetics())).f1;
  const bool ok = p2 > 0.90 && p1 >= 0.65 && p1 <= 0.95 && p1 > e1 && p2 > e2;
  return {ok, fmt("row1 PhonemeF1=%.4f (F1 %.4f), row2 PhonemeF1=%.4f (F1 %.4f)", p1, e1, p2, e2)};
}

Outcome near_miss_planted() {
  constexpr std::size_t kPlanted = 12;
  const auto set = testutil::planted_near_misses(phonetics(), kDefaultNearMissThreshold, kPlanted);
  if (!set.problems.empty()) return {false, "construction: " + set.problems.front()};
  const double rate = near_miss_rate(set.pairs, kDefaultNearMissThreshold, phonetics());
  const double expected = static_cast<double>(set.near) / static_cast<double>(set.pairs.size());
  return {set.pairs.size() == 100 && set.near == kPlanted && rate == expected,
          fmt("%zu pairs, planted %zu, measured rate %.4f", set.pairs.size(), set.near, rate)};
}

Outcome metric_ordering() {
  std::mt19937 rng(101);
  constexpr int kCases = 2000;
  int violations = 0, equal_cases = 0;
  for (int i = 0; i < kCases; ++i) {
    const auto [gold, pred] = testutil::random_state_pair(rng);
    const double e = f1_from_counts(exact_match_counts(gold, pred)).f1;
    const double p = f1_from_counts(phoneme_match_counts(gold, pred, phonetics())).f1;
    bool identical = true;
    for (const auto& [slot, v] : pred) {
      if (auto it = gold.find(slot); it != gold.end() && it->second != v) identical = false;
    }
    const bool ok = p >= e && e >= 0.0 && e <= 1.0 && p >= 0.0 && p <= 1.0 && (!identical || p == e);
    if (!ok) ++violations;
    if (identical) ++equal_cases;
  }
  return {violations == 0, fmt("%d pairs (%d with identical matched values), %d violations", kCases, equal_cases,
                               violations)};
}

Outcome edit_distance_oracles() {
  std::mt19937 rng(103);
  const auto& table = phonetics().table;
  const auto& alphabet = table.symbols();
  int phon_mismatch = 0, wer_mismatch = 0;
  constexpr int kPhon = 600, kWer = 600;
  for (int i = 0; i < kPhon; ++i) {
    const auto a = oracle::random_sequence(rng, alphabet, 5), b = oracle::random_sequence(rng, alphabet, 5);
    const double brute = oracle::brute_force_alignment(
        a, b, [&](const std::string& x, const std::string& y) { return substitution_cost(x, y, table); });
    if (std::fabs(phonetic_edit_distance(a, b, table) - brute) > 1e-9) ++phon_mismatch;
  }
  const std::vector<std::string> words = {"a", "b", "c", "d"};
  const std::vector<char32_t> chars = {U'x', U'y', U'z', U' '};
  for (int i = 0; i < kWer; ++i) {
    const auto r = oracle::random_sequence(rng, words, 6), h = oracle::random_sequence(rng, words, 6);
    if (levenshtein_counts<std::string>(r, h).total() != oracle::brute_force_edits(r, h)) ++wer_mismatch;
    const auto cr = oracle::random_sequence(rng, chars, 6), ch = oracle::random_sequence(rng, chars, 6);
    if (levenshtein_counts<char32_t>(cr, ch).total() != oracle::brute_force_edits(cr, ch)) ++wer_mismatch;
  }
  return {phon_mismatch == 0 && wer_mismatch == 0,
          fmt("phonetic %d cases / %d mismatches; WER+CER %d cases / %d mismatches", kPhon, phon_mismatch, 2 * kWer,
              wer_mismatch)};
}

Outcome semimetric_axioms() {
  std::mt19937 rng(107);
  const auto& table = phonetics().table;
  const auto& alphabet = table.symbols();
  constexpr int kCases = 1500;
  int violations = 0;
  for (int i = 0; i < kCases; ++i) {
    const auto x = oracle::random_sequence(rng, alphabet, 10), y = oracle::random_sequence(rng, alphabet, 10),
               z = oracle::random_sequence(rng, alphabet, 10);
    const double dxy = normalized_sequence_distance(x, y, table);
    const double dyx = normalized_sequence_distance(y, x, table);
    const bool ok = normalized_sequence_distance(x, x, table) == 0.0 && dxy == dyx && dxy >= 0.0 && dxy <= 1.0 &&
                    phonetic_edit_distance(x, z, table) <=
                        phonetic_edit_distance(x, y, table) + phonetic_edit_distance(y, z, table) + 1e-9;
    if (!ok) ++violations;
  }
  return {violations == 0, fmt("%d pairs/triples, %d violations", kCases, violations)};
}

Outcome count_identities() {
  std::mt19937 rng(109);
  constexpr int kCases = 2000;
  int violations = 0;
  for (int i = 0; i < kCases; ++i) {
    const auto [gold, pred] = testutil::random_state_pair(rng);
    for (const auto& c : {exact_match_counts(gold, pred), phoneme_match_counts(gold, pred, phonetics())}) {
      const auto b = classify_errors(gold, pred);
      const bool ok = c.fp == c.pred_total - c.common && c.fn == c.gold_total - c.common &&
                      b.type1 + b.type2 == c.fn && b.type1 + b.type3 == c.fp;
      if (!ok) ++violations;
    }
  }
  return {violations == 0, fmt("%d comparisons (exact and phoneme counts), %d violations", kCases, violations)};
}

Outcome normalizer_properties() {
  const auto normalizer = Normalizer::load_default();
  const auto lines = detail::read_lines(kFixtures / "transcripts_200.txt");
  int unstable = 0;
  for (const auto& line : lines) {
    const auto once = normalizer(line);
    if (normalizer(once) != once) ++unstable;
  }
  int round_trip_failures = 0;
  for (std::uint64_t n = 0; n <= 10'000; ++n) {
    if (oracle::words_to_number(number_to_words(n)) != n) ++round_trip_failures;
  }
  return {lines.size() == 200 && unstable == 0 && round_trip_failures == 0,
          fmt("%zu lines, %d not idempotent; 10001 numbers, %d round-trip failures", lines.size(), unstable,
              round_trip_failures)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "spokendst_acceptance";
  fs::create_directories(dir);
  auto run = [&](int jobs, const fs::path& out) {
    const std::string cmd = std::string("\"") + SPOKENDST_CLI + "\" evaluate -q --gold \"" +
                            (kFixtures / "corpus_gold.json").string() + "\" --pred \"" +
                            (kFixtures / "corpus_pred.jsonl").string() + "\" -j " + std::to_string(jobs) +
                            " --report \"" + out.string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const int a = run(1, dir / "sequential.json");
  const int b = run(4, dir / "parallel.json");
  const auto ja = slurp(dir / "sequential.json"), jb = slurp(dir / "parallel.json");
  fs::remove_all(dir);
  return {a == 0 && b == 0 && !ja.empty() && ja == jb,
          fmt("exit codes %d/%d, report sizes %zu/%zu bytes, %s", a, b, ja.size(), jb.size(),
              ja == jb ? "identical" : "different")};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked example row 1 exact F1 = 0.4000", 1.0, worked_row1_exact},
      {2, "worked example row 2 exact F1 = 0.0000", 1.0, worked_row2_exact},
      {3, "worked example PhonemeF1 tolerances and ordering", 30.0, worked_phoneme},
      {4, "near-miss rate recovers planted fraction", 30.0, near_miss_planted},
      {5, "PhonemeF1 >= F1 on random states", 30.0, metric_ordering},
      {6, "edit distances match exhaustive oracles", 30.0, edit_distance_oracles},
      {7, "phonetic distance semimetric axioms", 30.0, semimetric_axioms},
      {8, "count identities", 30.0, count_identities},
      {9, "normalizer idempotence and number round-trip", 30.0, normalizer_properties},
      {10, "evaluate reports identical for 1 and 4 threads", 30.0, determinism},
  };
  // Resource loading is shared setup, not part of any criterion's runtime.
  (void)phonetics();

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s  %2d  %-50s %s (%.3f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
