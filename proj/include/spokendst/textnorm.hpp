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

// Transcript normalization: special characters, identifier masking, number
// verbalization, misspelling correction and word-order repair. Each rewriter
// is total (non-matching text comes back unchanged) and idempotent on its own
// output. normalize_transcript chains them in a fixed order.

#ifndef SPOKENDST_TEXTNORM_HPP
#define SPOKENDST_TEXTNORM_HPP

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spokendst/core_model.hpp"
#include "spokendst/errors.hpp"
#include "spokendst/io.hpp"

namespace spokendst {

inline constexpr std::uint32_t kMaxVerbalizedNumber = 999'999;

/// English cardinal words without "and" or hyphens: 23 -> "twenty three",
/// 105 -> "one hundred five". Valid for 0..999,999.
inline std::string number_to_words(std::uint64_t n) {
  static constexpr std::string_view kSmall[] = {
      "zero",    "one",     "two",       "three",    "four",     "five",    "six",
      "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
      "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
  static constexpr std::string_view kTens[] = {"",      "",      "twenty",  "thirty", "forty",
                                               "fifty", "sixty", "seventy", "eighty", "ninety"};
  if (n > kMaxVerbalizedNumber) {
    throw RangeError("number_to_words: " + std::to_string(n) + " exceeds " +
                     std::to_string(kMaxVerbalizedNumber));
  }

  auto below_thousand = [&](std::uint64_t v) {
    std::vector<std::string> words;
    if (v >= 100) {
      words.emplace_back(kSmall[v / 100]);
      words.emplace_back("hundred");
      v %= 100;
      if (v == 0) return words;
    }
    if (v >= 20) {
      words.emplace_back(kTens[v / 10]);
      if (v % 10) words.emplace_back(kSmall[v % 10]);
    } else {
      words.emplace_back(kSmall[v]);
    }
    return words;
  };

  if (n < 1000) return detail::join(below_thousand(n));
  auto words = below_thousand(n / 1000);
  words.emplace_back("thousand");
  if (n % 1000) {
    auto rest = below_thousand(n % 1000);
    words.insert(words.end(), rest.begin(), rest.end());
  }
  return detail::join(words);
}

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_alnum(char c) { return is_digit(c) || is_alpha(c); }

/// Appends `word` to `out`, separated by single spaces from any adjacent
/// non-space text. `next` is the character that will follow, if any.
inline void append_word(std::string& out, std::string_view word, std::optional<char> next) {
  if (!out.empty() && !is_space(out.back())) out += ' ';
  out += word;
  if (next && !is_space(*next)) out += ' ';
}

/// Applies `rewrite` to each maximal non-space run of `text`, keeping the
/// whitespace between runs byte-for-byte.
template <typename Fn>
std::string map_tokens(std::string_view text, Fn&& rewrite) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      out += text[i++];
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    out += rewrite(text.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Token split into leading punctuation, alphanumeric-ish core, trailing
/// punctuation.
struct TokenParts {
  std::string_view lead, core, trail;
};

inline TokenParts split_token(std::string_view tok) {
  std::size_t b = 0, e = tok.size();
  while (b < e && !is_alnum(tok[b])) ++b;
  while (e > b && !is_alnum(tok[e - 1])) --e;
  return {tok.substr(0, b), tok.substr(b, e - b), tok.substr(e)};
}

inline bool ends_with_ci(std::string_view s, std::string_view suffix) {
  if (s.size() < suffix.size()) return false;
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])) != suffix[i]) return false;
  }
  return true;
}

/// Digits followed by a clock or ordinal suffix ("10am", "23rd").
inline bool is_numeric_with_suffix(std::string_view core) {
  std::size_t d = 0;
  while (d < core.size() && is_digit(core[d])) ++d;
  if (d == 0) return false;
  const auto rest = core.substr(d);
  for (std::string_view suffix : {"am", "pm", "st", "nd", "rd", "th"}) {
    if (rest.size() == suffix.size() && ends_with_ci(rest, suffix)) return true;
  }
  return false;
}

}  // namespace detail

/// True for mixed letter/digit tokens of length >= 4 such as postcodes
/// ("cb17ag") and booking references. Clock and ordinal forms ("10am",
/// "23rd") are not identifiers.
inline bool is_identifier_token(std::string_view core) {
  if (core.size() < 4) return false;
  bool letters = false, digits = false;
  for (char c : core) {
    if (detail::is_alpha(c)) letters = true;
    else if (detail::is_digit(c)) digits = true;
    else return false;
  }
  return letters && digits && !detail::is_numeric_with_suffix(core);
}

inline constexpr std::string_view kIdentifierMask = "[number]";

inline std::string mask_identifiers(std::string_view text) {
  return detail::map_tokens(text, [](std::string_view tok) {
    auto parts = detail::split_token(tok);
    if (!is_identifier_token(parts.core)) return std::string(tok);
    return std::string(parts.lead) + std::string(kIdentifierMask) + std::string(parts.trail);
  });
}

namespace detail {

struct ParsedAmount {
  std::uint64_t whole = 0;
  std::optional<std::uint64_t> cents;
  std::size_t length = 0;  // characters consumed
  bool overflow = false;
};

/// Parses "1,250.50"-style amounts at the start of `s`.
inline std::optional<ParsedAmount> parse_amount(std::string_view s) {
  ParsedAmount a;
  std::size_t i = 0;
  auto take_digit = [&](char c) {
    if (a.whole > 1'000'000'000ULL) a.overflow = true;
    else a.whole = a.whole * 10 + static_cast<std::uint64_t>(c - '0');
  };
  while (i < s.size() && is_digit(s[i])) take_digit(s[i++]);
  if (i == 0) return std::nullopt;
  // Thousands groups.
  while (i + 3 < s.size() && s[i] == ',' && is_digit(s[i + 1]) && is_digit(s[i + 2]) &&
         is_digit(s[i + 3]) && (i + 4 >= s.size() || !is_digit(s[i + 4]))) {
    for (std::size_t k = 1; k <= 3; ++k) take_digit(s[i + k]);
    i += 4;
  }
  if (i + 2 < s.size() && s[i] == '.' && is_digit(s[i + 1]) && is_digit(s[i + 2]) &&
      (i + 3 >= s.size() || !is_digit(s[i + 3]))) {
    a.cents = static_cast<std::uint64_t>((s[i + 1] - '0') * 10 + (s[i + 2] - '0'));
    i += 3;
  }
  a.length = i;
  return a;
}

struct Currency {
  std::string_view symbol;
  std::string_view singular, plural;
  std::string_view minor_singular, minor_plural;
};

inline constexpr Currency kCurrencies[] = {
    {"$", "dollar", "dollars", "cent", "cents"},
    {"\xC2\xA3", "pound", "pounds", "penny", "pence"},
    {"\xE2\x82\xAC", "euro", "euros", "cent", "cents"},
};

inline std::string verbalize_amount(const ParsedAmount& a, const Currency& cur, std::string_view digits) {
  if (a.overflow || a.whole > kMaxVerbalizedNumber) {
    // Too large to read as a cardinal; keep the digits and move the unit.
    return std::string(digits) + " " + std::string(cur.plural);
  }
  std::string out = number_to_words(a.whole) + " " + std::string(a.whole == 1 ? cur.singular : cur.plural);
  if (a.cents && *a.cents > 0) {
    out += " " + number_to_words(*a.cents) + " " +
           std::string(*a.cents == 1 ? cur.minor_singular : cur.minor_plural);
  }
  return out;
}

}  // namespace detail

/// Expands currency amounts ("$5" -> "five dollars", "£20" -> "twenty
/// pounds") and spells out %, &, @ and a '#' that precedes a number.
inline std::string normalize_special_chars(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 16);
  std::size_t i = 0;
  auto next_char = [&](std::size_t pos) -> std::optional<char> {
    return pos < text.size() ? std::optional<char>(text[pos]) : std::nullopt;
  };
  while (i < text.size()) {
    bool handled = false;
    for (const auto& cur : detail::kCurrencies) {
      if (text.substr(i, cur.symbol.size()) != cur.symbol) continue;
      const auto rest = text.substr(i + cur.symbol.size());
      if (auto amount = detail::parse_amount(rest)) {
        const auto end = i + cur.symbol.size() + amount->length;
        detail::append_word(out, detail::verbalize_amount(*amount, cur, rest.substr(0, amount->length)),
                            next_char(end));
        i = end;
        handled = true;
      }
      break;
    }
    if (handled) continue;

    const char c = text[i];
    std::string_view word;
    if (c == '%') word = "percent";
    else if (c == '&') word = "and";
    else if (c == '@') word = "at";
    else if (c == '#' && i + 1 < text.size() && detail::is_digit(text[i + 1])) word = "number";

    if (word.empty()) {
      out += c;
    } else {
      detail::append_word(out, word, next_char(i + 1));
    }
    ++i;
  }
  return out;
}

namespace detail {

/// Reads a digit string aloud: cardinal words when it is a plain number in
/// range, otherwise digit by digit (phone numbers, leading zeros).
inline std::string speak_digits(std::string_view digits) {
  const bool leading_zero = digits.size() > 1 && digits.front() == '0';
  if (!leading_zero && digits.size() <= 6) {
    return number_to_words(std::stoull(std::string(digits)));
  }
  std::vector<std::string> words;
  for (char d : digits) words.push_back(number_to_words(static_cast<std::uint64_t>(d - '0')));
  return join(words);
}

/// Matches H:MM / HH:MM with hour <= 24 and minute <= 59 at the start of `s`.
inline std::optional<std::pair<std::size_t, std::string>> match_time(std::string_view s) {
  std::size_t h = 0;
  while (h < s.size() && h < 3 && is_digit(s[h])) ++h;
  if (h == 0 || h > 2 || h >= s.size() || s[h] != ':') return std::nullopt;
  if (h + 2 >= s.size() || !is_digit(s[h + 1]) || !is_digit(s[h + 2])) return std::nullopt;
  if (h + 3 < s.size() && is_digit(s[h + 3])) return std::nullopt;
  const int hour = std::stoi(std::string(s.substr(0, h)));
  const int minute = (s[h + 1] - '0') * 10 + (s[h + 2] - '0');
  if (hour > 24 || minute > 59) return std::nullopt;
  std::string words = number_to_words(static_cast<std::uint64_t>(hour));
  if (minute != 0) words += " " + number_to_words(static_cast<std::uint64_t>(minute));
  return std::pair{h + 3, std::move(words)};
}

inline std::string verbalize_token(std::string_view tok) {
  std::string out;
  std::size_t i = 0;
  auto emit = [&](const std::string& words, std::size_t end) {
    if (!out.empty() && is_alnum(out.back())) out += ' ';
    out += words;
    if (end < tok.size() && is_alnum(tok[end])) out += ' ';
  };
  while (i < tok.size()) {
    if (!is_digit(tok[i]) || (i > 0 && is_digit(tok[i - 1]))) {
      out += tok[i++];
      continue;
    }
    const auto rest = tok.substr(i);
    if (auto time = match_time(rest)) {
      emit(time->second, i + time->first);
      i += time->first;
      continue;
    }
    auto amount = parse_amount(rest);
    std::size_t run = 0;
    while (run < rest.size() && is_digit(rest[run])) ++run;
    const bool has_groups = amount && amount->length > run && rest[run] == ',';
    if (has_groups && !amount->overflow && amount->whole <= kMaxVerbalizedNumber) {
      // "1,250" (and "1,250.50" minus the decimals).
      const std::size_t len = amount->length - (amount->cents ? 3 : 0);
      emit(number_to_words(amount->whole), i + len);
      i += len;
      continue;
    }
    std::string words = speak_digits(rest.substr(0, run));
    std::size_t end = i + run;
    if (end + 1 < tok.size() && tok[end] == '.' && is_digit(tok[end + 1])) {
      std::size_t frac = end + 1;
      while (frac < tok.size() && is_digit(tok[frac])) ++frac;
      std::vector<std::string> digits{words, "point"};
      for (std::size_t k = end + 1; k < frac; ++k) {
        digits.push_back(number_to_words(static_cast<std::uint64_t>(tok[k] - '0')));
      }
      words = join(digits);
      end = frac;
    }
    emit(words, end);
    i = end;
  }
  return out;
}

}  // namespace detail

/// Replaces digit runs with words. HH:MM times read as "<hour> <minute>"
/// ("15:30" -> "fifteen thirty", "15:00" -> "fifteen"). Identifier-shaped
/// tokens are left for mask_identifiers.
inline std::string verbalize_numbers_in_text(std::string_view text) {
  return detail::map_tokens(text, [](std::string_view tok) {
    if (is_identifier_token(detail::split_token(tok).core)) return std::string(tok);
    bool any_digit = false;
    for (char c : tok) any_digit = any_digit || detail::is_digit(c);
    return any_digit ? detail::verbalize_token(tok) : std::string(tok);
  });
}

/// Lowercase misspelling -> correction table.
class MisspellingLexicon {
 public:
  MisspellingLexicon() = default;

  /// Throws ResourceError if the table breaks its invariants.
  explicit MisspellingLexicon(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {
    for (const auto& [wrong, right] : entries_) validate(wrong, right, "<memory>");
    check_no_chains("<memory>");
  }

  /// TSV `wrong<TAB>right`; '#' lines and blank lines ignored.
  static MisspellingLexicon load(const std::filesystem::path& path) {
    MisspellingLexicon lex;
    const auto lines = detail::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const auto& line = lines[n];
      if (detail::trim(line).empty() || line.front() == '#') continue;
      auto cells = detail::split_tabs(line);
      const auto where = detail::location(path, n + 1);
      if (cells.size() != 2) throw ResourceError(where + ": expected 'wrong<TAB>right'");
      std::string wrong(detail::trim(cells[0])), right(detail::trim(cells[1]));
      lex.validate(wrong, right, where);
      lex.entries_.insert_or_assign(std::move(wrong), std::move(right));
    }
    lex.check_no_chains(path.string());
    return lex;
  }

  const std::string* find(std::string_view lowercase_token) const {
    auto it = entries_.find(std::string(lowercase_token));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  static void validate(const std::string& wrong, const std::string& right, const std::string& where) {
    if (wrong.empty() || right.empty()) throw ResourceError(where + ": empty misspelling entry");
    if (wrong != detail::to_lower_ascii(wrong)) throw ResourceError(where + ": key '" + wrong + "' is not lowercase");
    if (wrong == right) throw ResourceError(where + ": '" + wrong + "' maps to itself");
    if (detail::split_ws(wrong).size() != 1) throw ResourceError(where + ": key '" + wrong + "' is not one token");
  }

  // A correction that is itself a key would make the rewrite non-idempotent.
  void check_no_chains(const std::string& where) const {
    for (const auto& [wrong, right] : entries_) {
      if (entries_.count(detail::to_lower_ascii(right))) {
        throw ResourceError(where + ": correction '" + right + "' for '" + wrong + "' is itself a misspelling key");
      }
    }
  }

  std::map<std::string, std::string> entries_;
};

inline std::string correct_misspellings(std::string_view text, const MisspellingLexicon& lexicon) {
  if (lexicon.size() == 0) return std::string(text);
  return detail::map_tokens(text, [&](std::string_view tok) {
    auto parts = detail::split_token(tok);
    if (parts.core.empty()) return std::string(tok);
    const auto* fix = lexicon.find(detail::to_lower_ascii(parts.core));
    if (!fix) return std::string(tok);
    return std::string(parts.lead) + *fix + std::string(parts.trail);
  });
}

struct ReorderRule {
  std::vector<std::string> pattern;      // lowercase tokens
  std::vector<std::string> replacement;  // emitted verbatim
};

/// Ordered token-sequence rewrite rules for broken word orders.
class ReorderRules {
 public:
  ReorderRules() = default;

  explicit ReorderRules(std::vector<ReorderRule> rules) : rules_(std::move(rules)) {
    for (auto& r : rules_) {
      for (auto& t : r.pattern) t = detail::to_lower_ascii(t);
    }
    validate("<memory>");
  }

  /// The built-in table: just "I the am" -> "I am the".
  static ReorderRules defaults() { return ReorderRules({{{"i", "the", "am"}, {"I", "am", "the"}}}); }

  /// TSV `pattern<TAB>replacement`, tokens space-separated, '#' comments.
  static ReorderRules load(const std::filesystem::path& path) {
    std::vector<ReorderRule> rules;
    const auto lines = detail::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const auto& line = lines[n];
      if (detail::trim(line).empty() || line.front() == '#') continue;
      auto cells = detail::split_tabs(line);
      const auto where = detail::location(path, n + 1);
      if (cells.size() != 2) throw ResourceError(where + ": expected 'pattern<TAB>replacement'");
      ReorderRule rule{detail::split_ws(detail::to_lower_ascii(cells[0])), detail::split_ws(cells[1])};
      if (rule.pattern.empty() || rule.replacement.empty()) throw ResourceError(where + ": empty rule side");
      rules.push_back(std::move(rule));
    }
    ReorderRules out;
    out.rules_ = std::move(rules);
    out.validate(path.string());
    return out;
  }

  const std::vector<ReorderRule>& rules() const noexcept { return rules_; }

 private:
  static bool contains(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
    if (needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
      bool hit = true;
      for (std::size_t k = 0; k < needle.size() && hit; ++k) {
        hit = detail::to_lower_ascii(haystack[i + k]) == needle[k];
      }
      if (hit) return true;
    }
    return false;
  }

  void validate(const std::string& where) const {
    for (const auto& r : rules_) {
      for (const auto& q : rules_) {
        if (contains(r.replacement, q.pattern)) {
          throw ResourceError(where + ": replacement '" + detail::join(r.replacement) +
                              "' re-creates pattern '" + detail::join(q.pattern) + "'");
        }
      }
    }
  }

  std::vector<ReorderRule> rules_;
};

/// Rewrites every non-overlapping occurrence of each rule's pattern, rules in
/// table order, scanning left to right. Matching ignores case and trailing
/// punctuation; punctuation on the last matched token moves to the last
/// replacement token. Text without a match is returned byte-identical.
inline std::string reorder_words(std::string_view text, const ReorderRules& rules) {
  auto tokens = detail::split_ws(text);
  bool changed = false;
  for (const auto& rule : rules.rules()) {
    const auto k = rule.pattern.size();
    std::size_t i = 0;
    while (i + k <= tokens.size()) {
      bool hit = true;
      for (std::size_t j = 0; j < k && hit; ++j) {
        const auto& tok = tokens[i + j];
        std::string_view core = tok;
        // Only the final token may carry trailing punctuation.
        if (j + 1 == k) {
          while (!core.empty() && !detail::is_alnum(core.back())) core.remove_suffix(1);
        }
        hit = detail::to_lower_ascii(core) == rule.pattern[j];
      }
      if (!hit) {
        ++i;
        continue;
      }
      const auto& last = tokens[i + k - 1];
      std::size_t keep = last.size();
      while (keep > 0 && !detail::is_alnum(last[keep - 1])) --keep;
      const std::string trail = last.substr(keep);
      std::vector<std::string> repl = rule.replacement;
      repl.back() += trail;
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + k));
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(i), repl.begin(), repl.end());
      i += repl.size();
      changed = true;
    }
  }
  return changed ? detail::join(tokens) : std::string(text);
}

/// Special characters, identifier masking, number verbalization, misspelling
/// correction, word reordering; in that order. A second pass is a no-op.
inline std::string normalize_transcript(std::string_view text, const MisspellingLexicon& lexicon,
                                        const ReorderRules& rules) {
  std::string out = normalize_special_chars(text);
  out = mask_identifiers(out);
  out = verbalize_numbers_in_text(out);
  out = correct_misspellings(out, lexicon);
  return reorder_words(out, rules);
}

/// Resources for normalize_transcript bundled together.
struct Normalizer {
  MisspellingLexicon lexicon;
  ReorderRules rules = ReorderRules::defaults();

  static Normalizer load(const std::filesystem::path& misspellings, const std::filesystem::path& reorder_rules) {
    return {MisspellingLexicon::load(misspellings), ReorderRules::load(reorder_rules)};
  }

  static Normalizer load_default() {
    return load(data_dir() / "misspellings.tsv", data_dir() / "reorder_rules.tsv");
  }

  std::string operator()(std::string_view text) const { return normalize_transcript(text, lexicon, rules); }
};

}  // namespace spokendst

#endif  // SPOKENDST_TEXTNORM_HPP
