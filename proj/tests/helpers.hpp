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

// Small builders and random generators shared by the test binaries.

#ifndef SPOKENDST_TESTS_HELPERS_HPP
#define SPOKENDST_TESTS_HELPERS_HPP

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spokendst/core_model.hpp"
#include "oracles.hpp"
#include "spokendst/analysis.hpp"
#include "spokendst/metrics.hpp"

namespace testutil {

using spokendst::BeliefState;
using spokendst::Dialogue;
using spokendst::SlotName;

inline BeliefState state(std::initializer_list<std::pair<std::string, std::string>> pairs) {
  return spokendst::make_belief_state(pairs);
}

/// Dialogue whose turn-level gold states are the given ones, in order.
inline Dialogue dialogue(std::string id, std::vector<BeliefState> turn_states) {
  Dialogue d{std::move(id), {}};
  int n = 0;
  for (auto& s : turn_states) {
    ++n;
    d.turns.push_back({n, "system " + std::to_string(n), "user " + std::to_string(n), {n, std::move(s)}});
  }
  return d;
}

inline const std::vector<std::string>& slot_pool() {
  static const std::vector<std::string> kSlots = {
      "hotel-area",      "hotel-name",          "hotel-stars",       "restaurant-food", "restaurant-name",
      "restaurant-area", "restaurant-booktime", "taxi-departure",    "taxi-destination", "train-day",
      "train-leaveat",   "attraction-type"};
  return kSlots;
}

inline const std::vector<std::string>& value_pool() {
  static const std::vector<std::string> kValues = {
      "north",      "south",      "cambridge", "golden wok", "gordon wok", "dontcare", "2",       "15:30",
      "stevanage",  "stevanase",  "museum",    "cat",        "bat",        "pat",      "chinese", "italian",
      "monday",     "tuesday",    "cheap",     "expensive",  "centre",     "center",   "4",       "09:15"};
  return kValues;
}

/// A random (gold, pred) pair where pred copies, perturbs, drops or invents
/// slots so every error type shows up.
inline std::pair<BeliefState, BeliefState> random_state_pair(std::mt19937& rng) {
  const auto& slots = slot_pool();
  const auto& values = value_pool();
  std::uniform_int_distribution<std::size_t> pick_value(0, values.size() - 1);
  std::uniform_int_distribution<int> action(0, 9);
  BeliefState gold, pred;
  for (const auto& s : slots) {
    const auto slot = SlotName::parse(s);
    const int a = action(rng);
    if (a < 4) continue;  // in neither
    if (a < 8) gold[slot] = values[pick_value(rng)];
    if (a == 4 || a == 5) pred[slot] = gold[slot];
    else if (a == 6) pred[slot] = values[pick_value(rng)];
    else if (a == 8) pred[slot] = values[pick_value(rng)];
  }
  return {gold, pred};
}

struct PlantedSet {
  std::vector<spokendst::ValuePair> pairs;
  std::size_t near = 0;
  std::vector<std::string> problems;  // certification failures, if any
};

/// 100 type 1 pairs: `near_count` one-phoneme voicing swaps whose distance is
/// certified below `threshold` by a single-substitution upper bound, and far
/// pairs certified above it by (cheapest substitution) * (unit edit count) /
/// (longer length), a lower bound on the normalized distance.
inline PlantedSet planted_near_misses(const spokendst::PhoneticResources& res, double threshold,
                                      std::size_t near_count = 12) {
  using spokendst::ValuePair;
  static const std::vector<ValuePair> kNear = {
      {"bat", "pat"}, {"bin", "pin"}, {"dime", "time"}, {"gap", "cap"}, {"van", "fan"}, {"zip", "sip"},
      {"dug", "tug"}, {"big", "pig"}, {"bill", "pill"}, {"pat", "bat"}, {"time", "dime"}, {"fan", "van"}};
  static const std::vector<std::string> kFar = {"cambridge", "north",   "expensive", "museum",  "chinese",
                                                "monday",    "station", "hotel",     "taxi",    "golden",
                                                "london",    "cinema",  "theatre",   "birmingham", "parking"};
  const auto& table = res.table;
  double min_sub = 1.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table.size(); ++j) {
      if (i != j) min_sub = std::min(min_sub, table.cost(i, j));
    }
  }

  PlantedSet out;
  for (std::size_t k = 0; k < near_count && k < kNear.size(); ++k) {
    const auto& p = kNear[k];
    const auto a = spokendst::value_to_phonemes(p.gold, res), b = spokendst::value_to_phonemes(p.pred, res);
    double bound = 1.0;
    if (a.size() == b.size()) {
      std::size_t diffs = 0, at = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) ++diffs, at = i;
      }
      if (diffs == 1) bound = spokendst::substitution_cost(a[at], b[at], table) / static_cast<double>(a.size());
    }
    if (bound < threshold) {
      out.pairs.push_back(p);
      ++out.near;
    } else {
      out.problems.push_back("near pair " + p.gold + "/" + p.pred + " not certified");
    }
  }
  for (std::size_t i = 0; i < kFar.size() && out.pairs.size() < 100; ++i) {
    for (std::size_t j = i + 1; j < kFar.size() && out.pairs.size() < 100; ++j) {
      const auto a = spokendst::value_to_phonemes(kFar[i], res), b = spokendst::value_to_phonemes(kFar[j], res);
      const double lower = min_sub * static_cast<double>(oracle::plain_levenshtein(a, b)) /
                           static_cast<double>(std::max(a.size(), b.size()));
      if (lower >= threshold) out.pairs.push_back({kFar[i], kFar[j]});
    }
  }
  if (out.pairs.size() != 100) out.problems.push_back("only " + std::to_string(out.pairs.size()) + " pairs");
  // Interleave so near misses are not all at the front.
  std::mt19937 rng(61);
  std::shuffle(out.pairs.begin(), out.pairs.end(), rng);
  return out;
}

}  // namespace testutil

#endif  // SPOKENDST_TESTS_HELPERS_HPP
