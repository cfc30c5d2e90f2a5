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

// Dialogues, turns and belief states, plus accumulation of turn-level
// beliefs into the dialogue-level state that both F1 variants compare.

#ifndef SPOKENDST_CORE_MODEL_HPP
#define SPOKENDST_CORE_MODEL_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spokendst/errors.hpp"

namespace spokendst {

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

/// Splits on runs of whitespace; never yields empty tokens.
inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join(std::span<const std::string> tokens, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

inline bool is_terminal_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';';
}

}  // namespace detail

/// Lowercases, trims, collapses whitespace runs and strips terminal
/// punctuation (.,!?;). Interior colons and hyphens survive ("15:30").
/// All-whitespace input yields "", which callers treat as "no value".
inline std::string canonicalize_value(std::string_view raw) {
  std::string collapsed = detail::join(detail::split_ws(detail::to_lower_ascii(raw)));
  std::string_view v = collapsed;
  for (;;) {
    v = detail::trim(v);
    if (v.empty() || !detail::is_terminal_punct(v.back())) break;
    v.remove_suffix(1);
  }
  return std::string(v);
}

/// MultiWOZ sentinels meaning "slot not filled". Dropped at ingestion.
inline bool is_absent_value(std::string_view canonical) {
  return canonical.empty() || canonical == "none" || canonical == "not mentioned";
}

/// A "domain-slot" name such as hotel-area.
class SlotName {
 public:
  SlotName(std::string_view domain, std::string_view slot)
      : domain_(canonical_part(domain)), slot_(canonical_part(slot)) {
    if (domain_.empty() || slot_.empty()) {
      throw InputError("slot name needs a non-empty domain and slot, got '" +
                       std::string(domain) + "-" + std::string(slot) + "'");
    }
    if (domain_.find('-') != std::string::npos || slot_.find('-') != std::string::npos) {
      throw InputError("slot name parts may not contain '-': '" + domain_ + "-" + slot_ + "'");
    }
  }

  /// Parses "domain-slot". Case and inner spaces are folded, so
  /// "Hotel-Book People" becomes hotel-bookpeople.
  static SlotName parse(std::string_view text) {
    const auto pos = text.find('-');
    if (pos == std::string_view::npos) {
      throw InputError("slot name '" + std::string(text) + "' is not of the form domain-slot");
    }
    return SlotName(text.substr(0, pos), text.substr(pos + 1));
  }

  const std::string& domain() const noexcept { return domain_; }
  const std::string& slot() const noexcept { return slot_; }
  std::string str() const { return domain_ + "-" + slot_; }

  friend auto operator<=>(const SlotName&, const SlotName&) = default;
  friend bool operator==(const SlotName&, const SlotName&) = default;

 private:
  static std::string canonical_part(std::string_view s) {
    std::string out;
    for (char c : detail::trim(s)) {
      if (detail::is_space(c)) continue;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
  }

  std::string domain_;
  std::string slot_;
};

struct SlotValuePair {
  SlotName slot;
  std::string value;
};

/// Slot name to canonical value; one value per slot.
using BeliefState = std::map<SlotName, std::string>;

/// Builds a state from raw (slot, value) text, canonicalizing both sides.
/// Absent-value sentinels are dropped; on a repeated slot the last one wins.
inline BeliefState make_belief_state(std::span<const std::pair<std::string, std::string>> raw) {
  BeliefState state;
  for (const auto& [slot_text, value_text] : raw) {
    auto slot = SlotName::parse(slot_text);
    auto value = canonicalize_value(value_text);
    if (is_absent_value(value)) {
      state.erase(slot);
      continue;
    }
    state.insert_or_assign(std::move(slot), std::move(value));
  }
  return state;
}

inline BeliefState make_belief_state(std::initializer_list<std::pair<std::string, std::string>> raw) {
  return make_belief_state(std::span<const std::pair<std::string, std::string>>(raw.begin(), raw.size()));
}

struct TurnBelief {
  int turn_index = 1;
  BeliefState pairs;
};

struct Turn {
  int turn_index = 1;
  std::string system_utterance;
  std::string user_utterance;
  TurnBelief gold_turn_belief;
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<Turn> turns;

  std::vector<TurnBelief> turn_beliefs() const {
    std::vector<TurnBelief> out;
    out.reserve(turns.size());
    for (const auto& t : turns) out.push_back(t.gold_turn_belief);
    return out;
  }
};

/// Union of b_1..b_{up_to_turn}; later turns overwrite earlier values for the
/// same slot. `dialogue_id` only feeds the error message.
inline BeliefState accumulate_beliefs(std::span<const TurnBelief> turn_beliefs, int up_to_turn,
                                      std::string_view dialogue_id = "<anonymous>") {
  if (up_to_turn < 1 || static_cast<std::size_t>(up_to_turn) > turn_beliefs.size()) {
    throw RangeError("dialogue '" + std::string(dialogue_id) + "': turn " + std::to_string(up_to_turn) +
                     " outside [1, " + std::to_string(turn_beliefs.size()) + "]");
  }
  BeliefState state;
  for (std::size_t i = 0; i < static_cast<std::size_t>(up_to_turn); ++i) {
    for (const auto& [slot, value] : turn_beliefs[i].pairs) state.insert_or_assign(slot, value);
  }
  return state;
}

}  // namespace spokendst

#endif  // SPOKENDST_CORE_MODEL_HPP
