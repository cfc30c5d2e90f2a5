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

// Error taxonomy (wrong value / missed slot / spurious slot), phonetic
// near-miss rate over wrong-value errors, and accuracy per answer type.

#ifndef SPOKENDST_ANALYSIS_HPP
#define SPOKENDST_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "spokendst/core_model.hpp"
#include "spokendst/errors.hpp"
#include "spokendst/io.hpp"
#include "spokendst/metrics.hpp"
#include "spokendst/phonetics.hpp"

namespace spokendst {

/// type1: slot right, value wrong. type2: gold slot missing from the
/// prediction. type3: predicted slot absent from gold.
struct ErrorBreakdown {
  std::size_t type1 = 0;
  std::size_t type2 = 0;
  std::size_t type3 = 0;

  std::size_t total_errors() const noexcept { return type1 + type2 + type3; }

  ErrorBreakdown& operator+=(const ErrorBreakdown& o) {
    type1 += o.type1;
    type2 += o.type2;
    type3 += o.type3;
    return *this;
  }

  friend bool operator==(const ErrorBreakdown&, const ErrorBreakdown&) = default;
};

inline ErrorBreakdown classify_errors(const BeliefState& gold, const BeliefState& pred) {
  ErrorBreakdown b;
  for (const auto& [slot, value] : gold) {
    auto it = pred.find(slot);
    if (it == pred.end()) ++b.type2;
    else if (it->second != value) ++b.type1;
  }
  for (const auto& [slot, value] : pred) {
    if (!gold.count(slot)) ++b.type3;
  }
  return b;
}

struct ValuePair {
  std::string gold;
  std::string pred;

  friend bool operator==(const ValuePair&, const ValuePair&) = default;
};

/// The (gold, predicted) values behind each type 1 error, in slot order.
inline std::vector<ValuePair> type1_pairs(const BeliefState& gold, const BeliefState& pred) {
  std::vector<ValuePair> out;
  for (const auto& [slot, value] : gold) {
    auto it = pred.find(slot);
    if (it != pred.end() && it->second != value) out.push_back({value, it->second});
  }
  return out;
}

inline constexpr double kDefaultNearMissThreshold = 0.02;

/// Share of pairs whose phonetic distance is below `threshold`. Uses the same
/// distance as PhonemeF1 credit; pairs that cannot be rendered as phonemes
/// are never near misses. Empty input gives 0.
inline double near_miss_rate(std::span<const ValuePair> pairs, double threshold, const PhoneticResources& res) {
  if (pairs.empty()) return 0.0;
  std::size_t near = 0;
  for (const auto& p : pairs) {
    if (credit_distance(p.gold, p.pred, res) < threshold) ++near;
  }
  return static_cast<double>(near) / static_cast<double>(pairs.size());
}

enum class AnswerType { name = 0, categorical = 1, number = 2, time = 3 };

inline constexpr std::array<AnswerType, 4> kAnswerTypes = {AnswerType::name, AnswerType::categorical,
                                                           AnswerType::number, AnswerType::time};

inline std::string_view to_string(AnswerType t) {
  switch (t) {
    case AnswerType::name: return "name";
    case AnswerType::categorical: return "categorical";
    case AnswerType::number: return "number";
    case AnswerType::time: return "time";
  }
  return "name";
}

enum class SlotKind { open_name, closed_set, numeric, time };

struct SlotKindEntry {
  SlotKind kind = SlotKind::open_name;
  std::set<std::string> allowed_values;  // closed_set only
};

/// Per-slot kind hints for answer-type assignment.
class SlotOntology {
 public:
  SlotOntology() = default;

  explicit SlotOntology(std::map<SlotName, SlotKindEntry> entries) : entries_(std::move(entries)) {
    for (const auto& [slot, e] : entries_) {
      if (e.kind == SlotKind::closed_set && e.allowed_values.empty()) {
        throw ResourceError("closed_set slot '" + slot.str() + "' lists no values");
      }
    }
  }

  /// JSON object: "domain-slot" -> {"kind": open_name|closed_set|numeric|time,
  /// "values": [...]}. Values are canonicalized.
  static SlotOntology load(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ResourceError(path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw ResourceError(path.string() + ": ontology must be a JSON object");
    std::map<SlotName, SlotKindEntry> entries;
    for (const auto& [key, entry_json] : doc.items()) {
      const auto where = path.string() + ": slot '" + key + "'";
      if (!entry_json.is_object() || !entry_json.contains("kind") || !entry_json["kind"].is_string()) {
        throw ResourceError(where + " needs a string \"kind\"");
      }
      SlotKindEntry e;
      const auto kind = entry_json["kind"].get<std::string>();
      if (kind == "open_name") e.kind = SlotKind::open_name;
      else if (kind == "closed_set") e.kind = SlotKind::closed_set;
      else if (kind == "numeric") e.kind = SlotKind::numeric;
      else if (kind == "time") e.kind = SlotKind::time;
      else throw ResourceError(where + " has unknown kind '" + kind + "'");
      if (entry_json.contains("values")) {
        if (!entry_json["values"].is_array()) throw ResourceError(where + ": \"values\" must be an array");
        for (const auto& v : entry_json["values"]) {
          if (!v.is_string()) throw ResourceError(where + ": values must be strings");
          e.allowed_values.insert(canonicalize_value(v.get<std::string>()));
        }
      }
      try {
        entries.insert_or_assign(SlotName::parse(key), std::move(e));
      } catch (const InputError& err) {
        throw ResourceError(where + ": " + err.what());
      }
    }
    return SlotOntology(std::move(entries));
  }

  const SlotKindEntry* find(const SlotName& slot) const {
    auto it = entries_.find(slot);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<SlotName, SlotKindEntry> entries_;
};

namespace detail {

inline bool looks_like_time(std::string_view v) {
  const auto colon = v.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 2 || v.size() != colon + 3) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != colon && !is_digit(v[i])) return false;
  }
  return true;
}

inline bool is_cardinal_word(std::string_view w) {
  static const std::set<std::string_view> kWords = {
      "zero",     "one",      "two",       "three",    "four",     "five",   "six",     "seven",
      "eight",    "nine",     "ten",       "eleven",   "twelve",   "thirteen", "fourteen", "fifteen",
      "sixteen",  "seventeen", "eighteen", "nineteen", "twenty",   "thirty", "forty",   "fifty",
      "sixty",    "seventy",  "eighty",    "ninety",   "hundred",  "thousand"};
  return kWords.count(w) != 0;
}

inline bool looks_like_number(std::string_view v) {
  if (v.empty()) return false;
  bool all_digits = true;
  for (char c : v) all_digits = all_digits && is_digit(c);
  if (all_digits) return true;
  const auto words = split_ws(v);
  if (words.empty()) return false;
  for (const auto& w : words) {
    if (!is_cardinal_word(w)) return false;
  }
  return true;
}

}  // namespace detail

/// First match wins: Time (H:MM/HH:MM value or time slot), Number (digits,
/// cardinal words, or numeric slot), Categorical (closed-set slot), Name.
inline AnswerType answer_type_of(const SlotName& slot, std::string_view value, const SlotOntology& ontology) {
  const auto* entry = ontology.find(slot);
  const auto kind = entry ? std::optional<SlotKind>(entry->kind) : std::nullopt;
  if (detail::looks_like_time(value) || kind == SlotKind::time) return AnswerType::time;
  if (detail::looks_like_number(value) || kind == SlotKind::numeric) return AnswerType::number;
  if (kind == SlotKind::closed_set) return AnswerType::categorical;
  return AnswerType::name;
}

struct TypeAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct AnswerTypeReport {
  std::array<TypeAccuracy, 4> by_type{};  // indexed by AnswerType

  const TypeAccuracy& operator[](AnswerType t) const { return by_type[static_cast<std::size_t>(t)]; }
  TypeAccuracy& operator[](AnswerType t) { return by_type[static_cast<std::size_t>(t)]; }

  std::size_t gold_total() const {
    std::size_t n = 0;
    for (const auto& t : by_type) n += t.total;
    return n;
  }

  /// Share of gold pairs in category `t`.
  double share(AnswerType t) const {
    const auto n = gold_total();
    return n ? static_cast<double>((*this)[t].total) / static_cast<double>(n) : 0.0;
  }

  AnswerTypeReport& operator+=(const AnswerTypeReport& o) {
    for (std::size_t i = 0; i < by_type.size(); ++i) {
      by_type[i].correct += o.by_type[i].correct;
      by_type[i].total += o.by_type[i].total;
    }
    return *this;
  }
};

/// Categorizes each gold pair and counts exact-value hits in `pred`.
inline AnswerTypeReport answer_types(const BeliefState& gold, const BeliefState& pred, const SlotOntology& ontology) {
  AnswerTypeReport r;
  for (const auto& [slot, value] : gold) {
    auto& cell = r[answer_type_of(slot, value, ontology)];
    ++cell.total;
    auto it = pred.find(slot);
    if (it != pred.end() && it->second == value) ++cell.correct;
  }
  return r;
}

inline AnswerTypeReport per_type_accuracy(std::span<const TurnComparison> comparisons, const SlotOntology& ontology) {
  AnswerTypeReport r;
  for (const auto& c : comparisons) r += answer_types(c.gold, c.pred, ontology);
  return r;
}

inline AnswerTypeReport per_type_accuracy(std::span<const Dialogue> dialogues, const TurnPredictions& predictions,
                                          const SlotOntology& ontology, const ComparisonOptions& opts = {}) {
  const auto comparisons = build_comparisons(dialogues, predictions, opts);
  return per_type_accuracy(comparisons, ontology);
}

}  // namespace spokendst

#endif  // SPOKENDST_ANALYSIS_HPP
