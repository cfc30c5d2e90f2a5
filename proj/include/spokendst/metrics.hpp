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

// Slot-level F1 (exact and PhonemeF1) at pair, turn and corpus granularity,
// and word/character error rates.

#ifndef SPOKENDST_METRICS_HPP
#define SPOKENDST_METRICS_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spokendst/core_model.hpp"
#include "spokendst/edit_distance.hpp"
#include "spokendst/errors.hpp"
#include "spokendst/parallel.hpp"
#include "spokendst/phonetics.hpp"

namespace spokendst {

enum class MatchMode { exact, phoneme };

inline std::string_view to_string(MatchMode m) { return m == MatchMode::exact ? "exact" : "phoneme"; }

/// Slot-match tallies. tp is fractional under phonetic credit; fp and fn
/// always follow from the totals and the exact-match count.
struct MatchCounts {
  double tp = 0.0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t pred_total = 0;
  std::size_t gold_total = 0;
  std::size_t common = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    pred_total += o.pred_total;
    gold_total += o.gold_total;
    common += o.common;
    return *this;
  }

  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline MatchCounts exact_match_counts(const BeliefState& gold, const BeliefState& pred) {
  MatchCounts c;
  c.pred_total = pred.size();
  c.gold_total = gold.size();
  for (const auto& [slot, value] : pred) {
    auto it = gold.find(slot);
    if (it != gold.end() && it->second == value) ++c.common;
  }
  c.tp = static_cast<double>(c.common);
  c.fp = c.pred_total - c.common;
  c.fn = c.gold_total - c.common;
  return c;
}

inline constexpr std::string_view kDontCare = "dontcare";

/// Distance used for PhonemeF1 credit. "dontcare" only ever matches itself,
/// and values that cannot be rendered as phonemes get no credit; each such
/// failure is appended to `warnings` when given.
inline double credit_distance(std::string_view gold_value, std::string_view pred_value, const PhoneticResources& res,
                              std::vector<std::string>* warnings = nullptr) {
  if (gold_value == pred_value) return 0.0;
  if (gold_value == kDontCare || pred_value == kDontCare) return 1.0;
  try {
    return normalized_phonetic_distance(pred_value, gold_value, res);
  } catch (const Error& e) {
    if (warnings) {
      warnings->push_back("no phonetic credit for '" + std::string(pred_value) + "' vs '" +
                          std::string(gold_value) + "': " + e.what());
    }
    return 1.0;
  }
}

/// PhonemeF1 tallies: each predicted slot present in gold earns 1 - d credit;
/// common counts exact value matches only.
inline MatchCounts phoneme_match_counts(const BeliefState& gold, const BeliefState& pred, const PhoneticResources& res,
                                        std::vector<std::string>* warnings = nullptr) {
  MatchCounts c;
  c.pred_total = pred.size();
  c.gold_total = gold.size();
  for (const auto& [slot, value] : pred) {
    auto it = gold.find(slot);
    if (it == gold.end()) continue;
    c.tp += 1.0 - credit_distance(it->second, value, res, warnings);
    if (it->second == value) ++c.common;
  }
  c.fp = c.pred_total - c.common;
  c.fn = c.gold_total - c.common;
  return c;
}

/// precision = tp / pred_total, recall = tp / gold_total, f1 = 2 tp /
/// (pred_total + gold_total). Two empty sides score a perfect 1.
inline F1Score f1_from_counts(const MatchCounts& c) {
  if (c.pred_total == 0 && c.gold_total == 0) return {1.0, 1.0, 1.0};
  F1Score s;
  if (c.pred_total > 0) s.precision = c.tp / static_cast<double>(c.pred_total);
  if (c.gold_total > 0) s.recall = c.tp / static_cast<double>(c.gold_total);
  s.f1 = 2.0 * c.tp / static_cast<double>(c.pred_total + c.gold_total);
  return s;
}

/// Predicted turn-level (or, with pre_accumulated, dialogue-level) states:
/// dialogue_id -> turn index -> state.
using TurnPredictions = std::map<std::string, std::map<int, BeliefState>>;

/// Gold and predicted accumulated states at one turn.
struct TurnComparison {
  std::string dialogue_id;
  int turn = 1;
  BeliefState gold;
  BeliefState pred;
};

struct ComparisonOptions {
  /// Predictions already hold B_t rather than b_t.
  bool pre_accumulated = false;
};

/// Checks that every prediction names a known dialogue and turn. Throws an
/// IngestionError listing all offenders.
inline void check_prediction_keys(std::span<const Dialogue> dialogues, const TurnPredictions& predictions) {
  std::map<std::string, std::size_t> turns_per_dialogue;
  for (const auto& d : dialogues) turns_per_dialogue[d.dialogue_id] = d.turns.size();
  std::vector<std::string> problems;
  for (const auto& [id, turns] : predictions) {
    auto it = turns_per_dialogue.find(id);
    if (it == turns_per_dialogue.end()) {
      problems.push_back("prediction for unknown dialogue '" + id + "'");
      continue;
    }
    for (const auto& [turn, state] : turns) {
      if (turn < 1 || static_cast<std::size_t>(turn) > it->second) {
        problems.push_back("prediction for unknown turn " + std::to_string(turn) + " of dialogue '" + id + "' (has " +
                           std::to_string(it->second) + " turns)");
      }
    }
  }
  if (!problems.empty()) throw IngestionError(std::move(problems));
}

/// One comparison per gold turn of `dialogue`. Turns without a prediction
/// count as an empty prediction.
inline std::vector<TurnComparison> dialogue_comparisons(const Dialogue& dialogue, const TurnPredictions& predictions,
                                                        const ComparisonOptions& opts = {}) {
  const auto gold_beliefs = dialogue.turn_beliefs();
  std::vector<TurnBelief> pred_beliefs(dialogue.turns.size());
  const auto found = predictions.find(dialogue.dialogue_id);
  for (std::size_t i = 0; i < pred_beliefs.size(); ++i) {
    pred_beliefs[i].turn_index = static_cast<int>(i) + 1;
    if (found == predictions.end()) continue;
    if (auto t = found->second.find(static_cast<int>(i) + 1); t != found->second.end()) pred_beliefs[i].pairs = t->second;
  }
  std::vector<TurnComparison> out;
  out.reserve(dialogue.turns.size());
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    const int turn = static_cast<int>(i) + 1;
    out.push_back({dialogue.dialogue_id, turn, accumulate_beliefs(gold_beliefs, turn, dialogue.dialogue_id),
                   opts.pre_accumulated ? pred_beliefs[i].pairs
                                        : accumulate_beliefs(pred_beliefs, turn, dialogue.dialogue_id)});
  }
  return out;
}

/// Every turn of every dialogue, in corpus order.
inline std::vector<TurnComparison> build_comparisons(std::span<const Dialogue> dialogues,
                                                     const TurnPredictions& predictions,
                                                     const ComparisonOptions& opts = {}) {
  check_prediction_keys(dialogues, predictions);
  std::vector<TurnComparison> out;
  for (const auto& d : dialogues) {
    auto part = dialogue_comparisons(d, predictions, opts);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

inline MatchCounts compare_states(const BeliefState& gold, const BeliefState& pred, MatchMode mode,
                                  const PhoneticResources* res, std::vector<std::string>* warnings = nullptr) {
  if (mode == MatchMode::exact) return exact_match_counts(gold, pred);
  if (!res) throw InputError("phoneme mode needs phonetic resources");
  return phoneme_match_counts(gold, pred, *res, warnings);
}

struct CorpusOptions {
  ComparisonOptions comparison;
  unsigned threads = 1;
};

/// Summed counts of every turn comparison in each dialogue, one entry per
/// dialogue in input order.
inline std::vector<MatchCounts> per_dialogue_counts(std::span<const Dialogue> dialogues,
                                                    const TurnPredictions& predictions, MatchMode mode,
                                                    const PhoneticResources* res, const CorpusOptions& opts = {}) {
  check_prediction_keys(dialogues, predictions);
  return parallel_map(dialogues.size(), opts.threads, [&](std::size_t i) {
    MatchCounts sum;
    for (const auto& cmp : dialogue_comparisons(dialogues[i], predictions, opts.comparison)) {
      sum += compare_states(cmp.gold, cmp.pred, mode, res);
    }
    return sum;
  });
}

/// Micro-averaged corpus F1: counts from the accumulated state at every turn
/// are summed (in dialogue order, whatever the thread count) before one F1 is
/// taken.
inline MatchCounts corpus_counts(std::span<const Dialogue> dialogues, const TurnPredictions& predictions,
                                 MatchMode mode, const PhoneticResources* res, const CorpusOptions& opts = {}) {
  MatchCounts total;
  for (const auto& c : per_dialogue_counts(dialogues, predictions, mode, res, opts)) total += c;
  return total;
}

inline F1Score corpus_f1(std::span<const Dialogue> dialogues, const TurnPredictions& predictions, MatchMode mode,
                         const PhoneticResources* res = nullptr, const CorpusOptions& opts = {}) {
  return f1_from_counts(corpus_counts(dialogues, predictions, mode, res, opts));
}

struct ErrorRateResult {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t reference_length = 0;
  double rate = 0.0;
  /// Set when the reference was empty but the hypothesis was not; rate then
  /// holds the hypothesis length.
  bool empty_reference = false;

  std::size_t edits() const noexcept { return substitutions + insertions + deletions; }
};

namespace detail {

template <typename T>
ErrorRateResult error_rate(std::span<const T> ref, std::span<const T> hyp) {
  const auto counts = levenshtein_counts(ref, hyp);
  ErrorRateResult r{counts.substitutions, counts.insertions, counts.deletions, ref.size(), 0.0, false};
  if (!ref.empty()) {
    r.rate = static_cast<double>(r.edits()) / static_cast<double>(ref.size());
  } else if (!hyp.empty()) {
    r.rate = static_cast<double>(hyp.size());
    r.empty_reference = true;
  }
  return r;
}

/// UTF-8 code points; malformed bytes pass through one at a time.
inline std::vector<char32_t> code_points(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 1;
    if (i + len > s.size()) len = 1;
    char32_t cp = len == 1 ? b : static_cast<char32_t>(b & (0xFF >> (len + 1)));
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

}  // namespace detail

/// Lowercases, turns punctuation other than apostrophes and mask brackets
/// into spaces, and collapses whitespace.
inline std::string canonicalize_for_scoring(std::string_view text) {
  std::string out = detail::to_lower_ascii(text);
  for (auto& c : out) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::ispunct(u) && c != '\'' && c != '[' && c != ']') c = ' ';
  }
  return detail::join(detail::split_ws(out));
}

/// Uniform-cost Levenshtein over whitespace tokens.
inline ErrorRateResult word_error_rate(std::string_view reference, std::string_view hypothesis) {
  const auto ref = detail::split_ws(reference);
  const auto hyp = detail::split_ws(hypothesis);
  return detail::error_rate<std::string>(ref, hyp);
}

/// As word_error_rate over code points, spaces included.
inline ErrorRateResult char_error_rate(std::string_view reference, std::string_view hypothesis) {
  const auto ref = detail::code_points(reference);
  const auto hyp = detail::code_points(hypothesis);
  return detail::error_rate<char32_t>(ref, hyp);
}

/// Corpus rate: total edits over total reference length.
struct ErrorRateTotals {
  std::size_t edits = 0;
  std::size_t reference_length = 0;
  std::size_t lines = 0;

  void add(const ErrorRateResult& r) {
    edits += r.edits();
    reference_length += r.reference_length;
    ++lines;
  }

  /// With no reference words at all, the raw edit count (as for one line).
  double rate() const {
    return reference_length ? static_cast<double>(edits) / static_cast<double>(reference_length)
                            : static_cast<double>(edits);
  }
};

}  // namespace spokendst

#endif  // SPOKENDST_METRICS_HPP
