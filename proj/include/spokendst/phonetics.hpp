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

// Phonemic rendering of slot values and the feature-weighted phonetic edit
// distance behind PhonemeF1.
//
// Words are looked up in a CMU-format pronunciation lexicon (stress removed);
// anything missing goes through an ordered letter-to-sound rule table. Two
// phonemes cost the fraction of articulatory features on which they disagree
// to substitute, with half weight where only one side specifies the feature.
// Insertions and deletions cost 1, so dividing the optimal alignment cost by
// the longer sequence length gives a distance in [0, 1].

#ifndef SPOKENDST_PHONETICS_HPP
#define SPOKENDST_PHONETICS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spokendst/core_model.hpp"
#include "spokendst/edit_distance.hpp"
#include "spokendst/errors.hpp"
#include "spokendst/io.hpp"
#include "spokendst/textnorm.hpp"

namespace spokendst {

/// Phoneme symbols in order. Symbols are ARPAbet without stress digits.
using PhonemeSequence = std::vector<std::string>;

enum class FeatureValue : std::int8_t { minus = -1, unspecified = 0, plus = 1 };

using FeatureVector = std::vector<FeatureValue>;

class PhonemeFeatureTable {
 public:
  PhonemeFeatureTable() = default;

  /// Throws ResourceError on ragged rows or duplicate vectors.
  PhonemeFeatureTable(std::vector<std::string> feature_names,
                      std::vector<std::pair<std::string, FeatureVector>> rows)
      : feature_names_(std::move(feature_names)) {
    build(std::move(rows), "<memory>");
  }

  /// TSV with a header row `symbol<TAB>feature...` and cells in {+, -, 0}.
  /// '#' lines are comments.
  static PhonemeFeatureTable load(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    PhonemeFeatureTable table;
    std::vector<std::pair<std::string, FeatureVector>> rows;
    bool have_header = false;
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const auto& line = lines[n];
      if (detail::trim(line).empty() || line.front() == '#') continue;
      auto cells = detail::split_tabs(line);
      const auto where = detail::location(path, n + 1);
      if (!have_header) {
        if (cells.size() < 2) throw ResourceError(where + ": header needs at least one feature column");
        table.feature_names_.assign(cells.begin() + 1, cells.end());
        have_header = true;
        continue;
      }
      if (cells.size() != table.feature_names_.size() + 1) {
        throw ResourceError(where + ": expected " + std::to_string(table.feature_names_.size()) +
                            " feature cells, got " + std::to_string(cells.size() - 1));
      }
      FeatureVector fv;
      fv.reserve(cells.size() - 1);
      for (std::size_t k = 1; k < cells.size(); ++k) {
        const auto& cell = cells[k];
        if (cell == "+") fv.push_back(FeatureValue::plus);
        else if (cell == "-") fv.push_back(FeatureValue::minus);
        else if (cell == "0") fv.push_back(FeatureValue::unspecified);
        else throw ResourceError(where + ": bad feature cell '" + cell + "' (want +, - or 0)");
      }
      rows.emplace_back(cells[0], std::move(fv));
    }
    if (!have_header) throw ResourceError(path.string() + ": missing header row");
    table.build(std::move(rows), path.string());
    return table;
  }

  std::size_t feature_count() const noexcept { return feature_names_.size(); }
  std::size_t size() const noexcept { return symbols_.size(); }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  bool contains(std::string_view symbol) const { return index_.count(std::string(symbol)) != 0; }

  std::size_t index_of(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    if (it == index_.end()) throw TableError("phoneme '" + std::string(symbol) + "' is not in the feature table");
    return it->second;
  }

  const FeatureVector& features(std::string_view symbol) const { return vectors_[index_of(symbol)]; }

  /// Precomputed cost between two table indices.
  double cost(std::size_t a, std::size_t b) const noexcept { return costs_[a * symbols_.size() + b]; }

 private:
  static double feature_cost(const FeatureVector& a, const FeatureVector& b) {
    double mismatch = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] == b[k]) continue;
      const bool one_unspecified = a[k] == FeatureValue::unspecified || b[k] == FeatureValue::unspecified;
      mismatch += one_unspecified ? 0.5 : 1.0;
    }
    return mismatch / static_cast<double>(a.size());
  }

  void build(std::vector<std::pair<std::string, FeatureVector>> rows, const std::string& where) {
    if (feature_names_.empty()) throw ResourceError(where + ": feature table has no features");
    std::map<FeatureVector, std::string> seen;
    for (auto& [symbol, fv] : rows) {
      if (symbol.empty()) throw ResourceError(where + ": empty phoneme symbol");
      if (fv.size() != feature_names_.size()) {
        throw ResourceError(where + ": row '" + symbol + "' has " + std::to_string(fv.size()) + " features");
      }
      if (index_.count(symbol)) throw ResourceError(where + ": duplicate phoneme '" + symbol + "'");
      if (auto [it, fresh] = seen.emplace(fv, symbol); !fresh) {
        throw ResourceError(where + ": phonemes '" + it->second + "' and '" + symbol +
                            "' share a feature vector");
      }
      index_.emplace(symbol, symbols_.size());
      symbols_.push_back(std::move(symbol));
      vectors_.push_back(std::move(fv));
    }
    const auto n = symbols_.size();
    costs_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) costs_[i * n + j] = i == j ? 0.0 : feature_cost(vectors_[i], vectors_[j]);
    }
  }

  std::vector<std::string> feature_names_;
  std::vector<std::string> symbols_;
  std::vector<FeatureVector> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> costs_;
};

/// 0 for identical symbols, else the normalized feature disagreement.
inline double substitution_cost(std::string_view a, std::string_view b, const PhonemeFeatureTable& table) {
  return table.cost(table.index_of(a), table.index_of(b));
}

namespace detail {

/// "AH0" -> "AH".
inline std::string strip_stress(std::string_view symbol) {
  while (!symbol.empty() && is_digit(symbol.back())) symbol.remove_suffix(1);
  return std::string(symbol);
}

}  // namespace detail

/// Lowercase headword -> phoneme sequence.
class PronunciationLexicon {
 public:
  PronunciationLexicon() = default;

  explicit PronunciationLexicon(std::unordered_map<std::string, PhonemeSequence> entries)
      : entries_(std::move(entries)) {}

  /// CMU dictionary format: `WORD  PH1 PH2 ...`. Lines starting ";;;" and
  /// text after '#' are ignored, stress digits are stripped, headwords are
  /// case-folded, and for "word(2)"-style variants the first pronunciation
  /// listed wins.
  static PronunciationLexicon load(const std::filesystem::path& path) {
    PronunciationLexicon lex;
    const auto text = detail::read_file(path);
    const auto lines = detail::split_lines(text);
    lex.entries_.reserve(lines.size());
    for (std::size_t n = 0; n < lines.size(); ++n) {
      std::string_view line = lines[n];
      if (line.starts_with(";;;")) continue;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      auto fields = detail::split_ws(line);
      if (fields.empty()) continue;
      if (fields.size() < 2) {
        throw ResourceError(detail::location(path, n + 1) + ": headword '" + fields[0] + "' has no phonemes");
      }
      std::string word = detail::to_lower_ascii(fields[0]);
      if (auto paren = word.find('('); paren != std::string::npos && word.back() == ')') word.resize(paren);
      if (lex.entries_.count(word)) continue;
      PhonemeSequence seq;
      seq.reserve(fields.size() - 1);
      for (std::size_t k = 1; k < fields.size(); ++k) seq.push_back(detail::strip_stress(fields[k]));
      lex.entries_.emplace(std::move(word), std::move(seq));
    }
    return lex;
  }

  const PhonemeSequence* find(std::string_view word) const {
    auto it = entries_.find(std::string(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws ResourceError naming the first entry with a symbol `table` lacks.
  void validate(const PhonemeFeatureTable& table) const {
    for (const auto& [word, seq] : entries_) {
      for (const auto& ph : seq) {
        if (!table.contains(ph)) {
          throw ResourceError("lexicon entry '" + word + "' uses phoneme '" + ph + "' missing from the feature table");
        }
      }
    }
  }

 private:
  std::unordered_map<std::string, PhonemeSequence> entries_;
};

struct LetterToSoundRule {
  std::string chunk;
  PhonemeSequence phonemes;  // empty = silent
  std::string left_context;
  std::string right_context;
};

/// Ordered, context-sensitive grapheme -> phoneme rules. Context symbols:
/// letters match themselves, '#' a word boundary, '@' a vowel letter, '^' a
/// consonant letter, '+' one of e/i/y.
class LetterToSoundRules {
 public:
  LetterToSoundRules() = default;

  explicit LetterToSoundRules(std::vector<LetterToSoundRule> rules) : rules_(std::move(rules)) { index(); }

  /// TSV `chunk<TAB>phonemes<TAB>left<TAB>right`; trailing context columns may
  /// be omitted, '-' as phonemes means silent.
  static LetterToSoundRules load(const std::filesystem::path& path) {
    std::vector<LetterToSoundRule> rules;
    const auto lines = detail::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const auto& line = lines[n];
      if (detail::trim(line).empty() || line.front() == '#') continue;
      auto cells = detail::split_tabs(line);
      const auto where = detail::location(path, n + 1);
      if (cells.size() < 2 || cells.size() > 4) throw ResourceError(where + ": expected 2 to 4 columns");
      LetterToSoundRule rule;
      rule.chunk = detail::to_lower_ascii(detail::trim(cells[0]));
      if (rule.chunk.empty()) throw ResourceError(where + ": empty grapheme chunk");
      if (detail::trim(cells[1]) != "-") rule.phonemes = detail::split_ws(cells[1]);
      if (cells.size() > 2) rule.left_context = std::string(detail::trim(cells[2]));
      if (cells.size() > 3) rule.right_context = std::string(detail::trim(cells[3]));
      for (const auto* ctx : {&rule.left_context, &rule.right_context}) {
        for (char c : *ctx) {
          if (!(detail::is_alpha(c) || c == '#' || c == '@' || c == '^' || c == '+' || c == '\'')) {
            throw ResourceError(where + ": unknown context symbol '" + std::string(1, c) + "'");
          }
        }
      }
      rules.push_back(std::move(rule));
    }
    return LetterToSoundRules(std::move(rules));
  }

  const std::vector<LetterToSoundRule>& rules() const noexcept { return rules_; }

  void validate(const PhonemeFeatureTable& table) const {
    for (const auto& r : rules_) {
      for (const auto& ph : r.phonemes) {
        if (!table.contains(ph)) {
          throw ResourceError("letter-to-sound rule '" + r.chunk + "' emits phoneme '" + ph +
                              "' missing from the feature table");
        }
      }
    }
  }

  /// Applies the rules across `word` (lowercase letters and apostrophes).
  /// Throws InputError at the first position no rule covers.
  PhonemeSequence apply(std::string_view word) const {
    PhonemeSequence out;
    std::size_t pos = 0;
    while (pos < word.size()) {
      const LetterToSoundRule* hit = nullptr;
      auto bucket = by_first_.find(word[pos]);
      if (bucket != by_first_.end()) {
        for (const auto idx : bucket->second) {
          const auto* rule = &rules_[idx];
          if (word.compare(pos, rule->chunk.size(), rule->chunk) != 0) continue;
          if (!left_matches(word, pos, rule->left_context)) continue;
          if (!right_matches(word, pos + rule->chunk.size(), rule->right_context)) continue;
          hit = rule;
          break;
        }
      }
      if (!hit) {
        throw InputError("no letter-to-sound rule for '" + std::string(1, word[pos]) + "' in '" +
                         std::string(word) + "'");
      }
      out.insert(out.end(), hit->phonemes.begin(), hit->phonemes.end());
      pos += hit->chunk.size();
    }
    return out;
  }

 private:
  static bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  }

  static bool class_matches(char pattern, char c) {
    switch (pattern) {
      case '@': return is_vowel_letter(c);
      case '^': return detail::is_alpha(c) && !is_vowel_letter(c);
      case '+': return c == 'e' || c == 'i' || c == 'y';
      default: return pattern == c;
    }
  }

  static bool left_matches(std::string_view word, std::size_t pos, std::string_view ctx) {
    std::size_t j = pos;
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
      if (*it == '#') {
        if (j != 0) return false;
        continue;
      }
      if (j == 0 || !class_matches(*it, word[j - 1])) return false;
      --j;
    }
    return true;
  }

  static bool right_matches(std::string_view word, std::size_t pos, std::string_view ctx) {
    std::size_t j = pos;
    for (char c : ctx) {
      if (c == '#') {
        if (j != word.size()) return false;
        continue;
      }
      if (j >= word.size() || !class_matches(c, word[j])) return false;
      ++j;
    }
    return true;
  }

  // Longest chunk first, then file order.
  void index() {
    by_first_.clear();
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (rules_[i].chunk.empty()) throw ResourceError("letter-to-sound rule with empty chunk");
      by_first_[rules_[i].chunk.front()].push_back(i);
    }
    for (auto& [c, bucket] : by_first_) {
      std::stable_sort(bucket.begin(), bucket.end(), [this](std::size_t a, std::size_t b) {
        return rules_[a].chunk.size() > rules_[b].chunk.size();
      });
    }
  }

  std::vector<LetterToSoundRule> rules_;
  std::unordered_map<char, std::vector<std::size_t>> by_first_;  // indices into rules_
};

namespace detail {

/// Context-free single-letter readings, for words every rule left silent.
inline PhonemeSequence spell_out(std::string_view word, const LetterToSoundRules& rules) {
  PhonemeSequence out;
  for (char c : word) {
    for (const auto& r : rules.rules()) {
      if (r.chunk.size() == 1 && r.chunk[0] == c && r.left_context.empty() && r.right_context.empty() &&
          !r.phonemes.empty()) {
        out.insert(out.end(), r.phonemes.begin(), r.phonemes.end());
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Lexicon entry when present, otherwise the letter-to-sound rules. The word
/// must already be lowercase; digits and other non-letters (apostrophes
/// aside) are rejected with InputError.
inline PhonemeSequence grapheme_to_phoneme(std::string_view word, const PronunciationLexicon& lexicon,
                                           const LetterToSoundRules& rules) {
  if (word.empty()) return {};
  if (const auto* entry = lexicon.find(word)) return *entry;
  bool has_letter = false;
  for (char c : word) {
    if (c >= 'a' && c <= 'z') {
      has_letter = true;
    } else if (c != '\'') {
      throw InputError("cannot convert '" + std::string(word) + "' to phonemes: unexpected character '" +
                       std::string(1, c) + "'");
    }
  }
  if (!has_letter) throw InputError("cannot convert '" + std::string(word) + "' to phonemes: no letters");
  auto seq = rules.apply(word);
  if (seq.empty()) seq = detail::spell_out(word, rules);
  if (seq.empty()) throw InputError("letter-to-sound rules produced nothing for '" + std::string(word) + "'");
  return seq;
}

/// Whitespace-tokenized phrase, each token through G2P, concatenated with no
/// boundary symbol.
inline PhonemeSequence phrase_to_phonemes(std::string_view text, const PronunciationLexicon& lexicon,
                                          const LetterToSoundRules& rules) {
  PhonemeSequence out;
  for (const auto& tok : detail::split_ws(text)) {
    auto part = grapheme_to_phoneme(tok, lexicon, rules);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// Optimal alignment cost with unit insertions/deletions and feature-based
/// substitutions.
inline double phonetic_edit_distance(std::span<const std::string> s1, std::span<const std::string> s2,
                                     const PhonemeFeatureTable& table) {
  std::vector<std::size_t> a(s1.size()), b(s2.size());
  std::transform(s1.begin(), s1.end(), a.begin(), [&](const auto& s) { return table.index_of(s); });
  std::transform(s2.begin(), s2.end(), b.begin(), [&](const auto& s) { return table.index_of(s); });
  return weighted_edit_distance<std::size_t>(a, b, [&](std::size_t x, std::size_t y) { return table.cost(x, y); });
}

/// Raw distance divided by the longer length, clamped to [0, 1]. Two empty
/// sequences are at distance 0; one empty sequence is at distance 1 from any
/// non-empty one.
inline double normalized_sequence_distance(std::span<const std::string> p1, std::span<const std::string> p2,
                                           const PhonemeFeatureTable& table) {
  if (p1.empty() && p2.empty()) return 0.0;
  if (p1.empty() || p2.empty()) return 1.0;
  const double raw = phonetic_edit_distance(p1, p2, table);
  return std::clamp(raw / static_cast<double>(std::max(p1.size(), p2.size())), 0.0, 1.0);
}

/// Everything needed to turn values into phonemes and compare them.
struct PhoneticResources {
  PhonemeFeatureTable table;
  PronunciationLexicon lexicon;
  LetterToSoundRules rules;

  /// Loads and cross-checks all three files. Every lexicon symbol and rule
  /// output must exist in the feature table.
  static PhoneticResources load(const std::filesystem::path& features, const std::filesystem::path& lexicon,
                                const std::filesystem::path& g2p_rules) {
    PhoneticResources res{PhonemeFeatureTable::load(features), PronunciationLexicon::load(lexicon),
                          LetterToSoundRules::load(g2p_rules)};
    res.lexicon.validate(res.table);
    res.rules.validate(res.table);
    return res;
  }

  static PhoneticResources load_default() {
    const auto dir = data_dir();
    return load(dir / "features.tsv", dir / "cmudict.dict", dir / "g2p_rules.tsv");
  }
};

/// Rewrites a canonical slot value into space-separated lowercase words for
/// G2P: numbers and times are spelled out, digits left inside identifiers
/// ("cb17ag") are read one at a time, and hyphens, colons, periods, commas
/// and slashes become word breaks.
inline std::string phonetic_text(std::string_view value) {
  const std::string text = verbalize_numbers_in_text(detail::to_lower_ascii(value));
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (detail::is_digit(c)) {
      out += ' ';
      out += number_to_words(static_cast<std::uint64_t>(c - '0'));
      out += ' ';
    } else if (c == '-' || c == ':' || c == '.' || c == ',' || c == '/') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

inline PhonemeSequence value_to_phonemes(std::string_view value, const PhoneticResources& res) {
  return phrase_to_phonemes(phonetic_text(value), res.lexicon, res.rules);
}

/// Pronunciation distance in [0, 1] between two canonical values. Textually
/// equal values are at distance 0 without consulting G2P.
inline double normalized_phonetic_distance(std::string_view v1, std::string_view v2, const PhoneticResources& res) {
  if (v1 == v2) return 0.0;
  const auto p1 = value_to_phonemes(v1, res);
  const auto p2 = value_to_phonemes(v2, res);
  return normalized_sequence_distance(p1, p2, res.table);
}

/// ARPAbet -> IPA labels, for display.
class IpaMap {
 public:
  static IpaMap load(const std::filesystem::path& path) {
    IpaMap map;
    const auto lines = detail::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const auto& line = lines[n];
      if (detail::trim(line).empty() || line.front() == '#') continue;
      auto cells = detail::split_tabs(line);
      if (cells.size() != 2) throw ResourceError(detail::location(path, n + 1) + ": expected 'arpabet<TAB>ipa'");
      if (!map.labels_.emplace(cells[0], cells[1]).second) {
        throw ResourceError(detail::location(path, n + 1) + ": duplicate symbol '" + cells[0] + "'");
      }
    }
    return map;
  }

  std::string render(std::span<const std::string> seq) const {
    std::string out;
    for (const auto& ph : seq) {
      auto it = labels_.find(ph);
      if (it == labels_.end()) throw TableError("no IPA label for '" + ph + "'");
      out += it->second;
    }
    return out;
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::map<std::string, std::string>& labels() const noexcept { return labels_; }

 private:
  std::map<std::string, std::string> labels_;
};

}  // namespace spokendst

#endif  // SPOKENDST_PHONETICS_HPP
