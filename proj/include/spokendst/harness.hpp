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

// Batch evaluation harness: gold/prediction ingestion, resource loading, and
// the evaluate / analyze / normalize / wer runs behind the command-line tool.
//
// Gold file (JSON):
//   {"dialogues": [{"dialogue_id": str,
//                   "turns": [{"turn": int, "system": str, "user": str,
//                              "state": {"domain-slot": str, ...}}]}]}
// "state" holds the turn-level belief b_t; accumulation happens at scoring.
//
// Predictions (JSON lines), one record per line:
//   {"dialogue_id": str, "turn": int, "state": {...}, "asr_hypothesis": str?}
// Unknown fields are ignored.

#ifndef SPOKENDST_HARNESS_HPP
#define SPOKENDST_HARNESS_HPP

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "spokendst/analysis.hpp"
#include "spokendst/core_model.hpp"
#include "spokendst/errors.hpp"
#include "spokendst/io.hpp"
#include "spokendst/metrics.hpp"
#include "spokendst/parallel.hpp"
#include "spokendst/phonetics.hpp"
#include "spokendst/textnorm.hpp"

namespace spokendst {

namespace detail {

inline std::string read_input_file(const std::filesystem::path& path) {
  try {
    return read_file(path);
  } catch (const ResourceError& e) {
    throw IngestionError({e.what()});
  }
}

/// Reads a "domain-slot" -> value object into a state, reporting problems
/// under `where`.
inline BeliefState parse_state(const nlohmann::json& obj, const std::string& where,
                               std::vector<std::string>& problems) {
  if (!obj.is_object()) {
    problems.push_back(where + ": expected an object of slot -> value");
    return {};
  }
  std::vector<std::pair<std::string, std::string>> raw;
  for (const auto& [slot, value] : obj.items()) {
    if (!value.is_string()) {
      problems.push_back(where + "/" + slot + ": value must be a string");
      continue;
    }
    try {
      (void)SlotName::parse(slot);
    } catch (const InputError& e) {
      problems.push_back(where + "/" + slot + ": " + e.what());
      continue;
    }
    raw.emplace_back(slot, value.get<std::string>());
  }
  return make_belief_state(raw);
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace detail

/// Gold corpus from the JSON schema above. Values are canonicalized and
/// "none"/"not mentioned" slots dropped. All problems are collected into one
/// IngestionError.
inline std::vector<Dialogue> parse_dialogues(std::string_view text, const std::string& source = "<gold>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError({source + ": invalid JSON: " + e.what()});
  }
  if (!doc.is_object() || !doc.contains("dialogues") || !doc["dialogues"].is_array()) {
    throw IngestionError({source + ": /dialogues: expected an array"});
  }
  std::vector<std::string> problems;
  std::vector<Dialogue> corpus;
  std::map<std::string, std::size_t> seen;
  const auto& dialogues = doc["dialogues"];
  for (std::size_t di = 0; di < dialogues.size(); ++di) {
    const auto& jd = dialogues[di];
    const std::string path = "/dialogues/" + std::to_string(di);
    if (!jd.is_object() || !jd.contains("dialogue_id") || !jd["dialogue_id"].is_string()) {
      problems.push_back(source + ": " + path + "/dialogue_id: expected a string");
      continue;
    }
    Dialogue d;
    d.dialogue_id = jd["dialogue_id"].get<std::string>();
    const std::string where = source + ": dialogue '" + d.dialogue_id + "' " + path;
    if (auto [it, fresh] = seen.emplace(d.dialogue_id, di); !fresh) {
      problems.push_back(where + ": duplicate dialogue_id (first at /dialogues/" + std::to_string(it->second) + ")");
      continue;
    }
    if (!jd.contains("turns") || !jd["turns"].is_array() || jd["turns"].empty()) {
      problems.push_back(where + "/turns: expected a non-empty array");
      continue;
    }
    const auto& turns = jd["turns"];
    for (std::size_t ti = 0; ti < turns.size(); ++ti) {
      const auto& jt = turns[ti];
      const std::string tpath = where + "/turns/" + std::to_string(ti);
      if (!jt.is_object()) {
        problems.push_back(tpath + ": expected an object");
        continue;
      }
      Turn t;
      if (!jt.contains("turn") || !jt["turn"].is_number_integer()) {
        problems.push_back(tpath + "/turn: expected an integer");
        continue;
      }
      t.turn_index = jt["turn"].get<int>();
      if (t.turn_index != static_cast<int>(ti) + 1) {
        problems.push_back(tpath + "/turn: turn indices must run 1, 2, 3, ...; expected " + std::to_string(ti + 1) +
                           ", got " + std::to_string(t.turn_index));
      }
      if (jt.contains("system")) {
        if (jt["system"].is_string()) t.system_utterance = jt["system"].get<std::string>();
        else problems.push_back(tpath + "/system: expected a string");
      }
      if (!jt.contains("user") || !jt["user"].is_string() || detail::trim(jt["user"].get<std::string>()).empty()) {
        problems.push_back(tpath + "/user: expected a non-empty string");
      } else {
        t.user_utterance = jt["user"].get<std::string>();
      }
      t.gold_turn_belief.turn_index = t.turn_index;
      if (jt.contains("state")) t.gold_turn_belief.pairs = detail::parse_state(jt["state"], tpath + "/state", problems);
      d.turns.push_back(std::move(t));
    }
    corpus.push_back(std::move(d));
  }
  if (!problems.empty()) throw IngestionError(std::move(problems));
  return corpus;
}

inline std::vector<Dialogue> load_dialogues(const std::filesystem::path& path) {
  return parse_dialogues(detail::read_input_file(path), path.string());
}

struct PredictionRecord {
  std::string dialogue_id;
  int turn_index = 1;
  BeliefState predicted_turn_belief;
  std::optional<std::string> asr_hypothesis;
};

/// JSON-lines predictions; blank lines are skipped. Problems carry 1-based
/// line numbers; duplicates name both lines.
inline std::vector<PredictionRecord> parse_predictions(std::string_view text, const std::string& source = "<pred>") {
  std::vector<std::string> problems;
  std::vector<PredictionRecord> records;
  std::map<std::pair<std::string, int>, std::size_t> seen;
  const auto lines = detail::split_lines(std::string(text));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (detail::trim(lines[n]).empty()) continue;
    const auto where = source + ":" + std::to_string(n + 1);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[n]);
    } catch (const nlohmann::json::exception& e) {
      problems.push_back(where + ": malformed JSON: " + e.what());
      continue;
    }
    if (!j.is_object()) {
      problems.push_back(where + ": expected a JSON object");
      continue;
    }
    PredictionRecord r;
    if (!j.contains("dialogue_id") || !j["dialogue_id"].is_string()) {
      problems.push_back(where + ": /dialogue_id: expected a string");
      continue;
    }
    r.dialogue_id = j["dialogue_id"].get<std::string>();
    if (!j.contains("turn") || !j["turn"].is_number_integer() || j["turn"].get<long long>() < 1) {
      problems.push_back(where + ": /turn: expected an integer >= 1");
      continue;
    }
    r.turn_index = j["turn"].get<int>();
    if (j.contains("state")) r.predicted_turn_belief = detail::parse_state(j["state"], where + ": /state", problems);
    if (j.contains("asr_hypothesis")) {
      if (j["asr_hypothesis"].is_string()) r.asr_hypothesis = j["asr_hypothesis"].get<std::string>();
      else if (!j["asr_hypothesis"].is_null()) problems.push_back(where + ": /asr_hypothesis: expected a string");
    }
    if (auto [it, fresh] = seen.emplace(std::pair{r.dialogue_id, r.turn_index}, n + 1); !fresh) {
      problems.push_back(source + ": duplicate prediction for dialogue '" + r.dialogue_id + "' turn " +
                         std::to_string(r.turn_index) + " on lines " + std::to_string(it->second) + " and " +
                         std::to_string(n + 1));
      continue;
    }
    records.push_back(std::move(r));
  }
  if (!problems.empty()) throw IngestionError(std::move(problems));
  return records;
}

inline std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  return parse_predictions(detail::read_input_file(path), path.string());
}

inline TurnPredictions to_turn_predictions(const std::vector<PredictionRecord>& records) {
  TurnPredictions out;
  for (const auto& r : records) out[r.dialogue_id][r.turn_index] = r.predicted_turn_belief;
  return out;
}

struct ResourcePaths {
  std::filesystem::path lexicon = data_dir() / "cmudict.dict";
  std::filesystem::path features = data_dir() / "features.tsv";
  std::filesystem::path g2p_rules = data_dir() / "g2p_rules.tsv";
  std::filesystem::path ontology = data_dir() / "ontology.json";
};

struct EvalResources {
  PhoneticResources phonetics;
  SlotOntology ontology;
  /// File name -> SHA-256 of its bytes, keyed by role.
  std::map<std::string, std::string> digests;

  static EvalResources load(const ResourcePaths& paths) {
    EvalResources res{PhoneticResources::load(paths.features, paths.lexicon, paths.g2p_rules),
                      SlotOntology::load(paths.ontology),
                      {}};
    res.digests["lexicon"] = detail::sha256_hex(detail::read_file(paths.lexicon));
    res.digests["features"] = detail::sha256_hex(detail::read_file(paths.features));
    res.digests["g2p_rules"] = detail::sha256_hex(detail::read_file(paths.g2p_rules));
    res.digests["ontology"] = detail::sha256_hex(detail::read_file(paths.ontology));
    return res;
  }
};

enum class ScoreMode { exact, phoneme, both };

inline std::string_view to_string(ScoreMode m) {
  switch (m) {
    case ScoreMode::exact: return "exact";
    case ScoreMode::phoneme: return "phoneme";
    case ScoreMode::both: return "both";
  }
  return "both";
}

struct EvalFlags {
  ScoreMode mode = ScoreMode::both;
  double near_miss_threshold = kDefaultNearMissThreshold;
  bool pre_accumulated = false;
  unsigned threads = 1;
};

struct ScoreBlock {
  MatchCounts counts;
  F1Score score;
};

struct DialogueResult {
  std::string dialogue_id;
  std::size_t turns = 0;
  std::optional<ScoreBlock> exact;
  std::optional<ScoreBlock> phoneme;
  ErrorBreakdown errors;
  AnswerTypeReport answer_types;
  std::vector<ValuePair> type1;
  ErrorRateTotals wer;
  ErrorRateTotals cer;
  std::vector<std::string> warnings;
};

struct EvalReport {
  std::map<std::string, std::string> input_digests;     // gold, pred
  std::map<std::string, std::string> resource_digests;  // lexicon, features, ...
  EvalFlags flags;
  std::size_t dialogue_count = 0;
  std::size_t turn_count = 0;
  std::optional<ScoreBlock> exact;
  std::optional<ScoreBlock> phoneme;
  std::optional<ErrorRateTotals> wer;
  std::optional<ErrorRateTotals> cer;
  ErrorBreakdown errors;
  AnswerTypeReport answer_types;
  std::size_t type1_pairs = 0;
  double near_miss_rate = 0.0;
  std::vector<DialogueResult> dialogues;  // sorted by dialogue_id
  std::vector<std::string> warnings;
};

namespace detail {

inline DialogueResult evaluate_dialogue(const Dialogue& d, const TurnPredictions& preds,
                                        const std::map<std::pair<std::string, int>, std::string>& asr,
                                        const EvalResources& res, const EvalFlags& flags) {
  DialogueResult out;
  out.dialogue_id = d.dialogue_id;
  out.turns = d.turns.size();
  const bool want_exact = flags.mode != ScoreMode::phoneme;
  const bool want_phoneme = flags.mode != ScoreMode::exact;
  MatchCounts exact, phon;
  for (const auto& cmp : dialogue_comparisons(d, preds, {flags.pre_accumulated})) {
    if (want_exact) exact += exact_match_counts(cmp.gold, cmp.pred);
    if (want_phoneme) phon += phoneme_match_counts(cmp.gold, cmp.pred, res.phonetics, &out.warnings);
    out.errors += classify_errors(cmp.gold, cmp.pred);
    out.answer_types += answer_types(cmp.gold, cmp.pred, res.ontology);
    auto pairs = type1_pairs(cmp.gold, cmp.pred);
    out.type1.insert(out.type1.end(), pairs.begin(), pairs.end());
  }
  if (want_exact) out.exact = ScoreBlock{exact, f1_from_counts(exact)};
  if (want_phoneme) out.phoneme = ScoreBlock{phon, f1_from_counts(phon)};
  for (const auto& t : d.turns) {
    auto it = asr.find({d.dialogue_id, t.turn_index});
    if (it == asr.end()) continue;
    const auto ref = canonicalize_for_scoring(t.user_utterance);
    const auto hyp = canonicalize_for_scoring(it->second);
    out.wer.add(word_error_rate(ref, hyp));
    out.cer.add(char_error_rate(ref, hyp));
  }
  return out;
}

}  // namespace detail

/// Scores `predictions` against `gold`. Dialogues are processed on
/// flags.threads workers; all sums run in dialogue_id order afterwards, so
/// the report does not depend on the thread count.
inline EvalReport evaluate(const std::vector<Dialogue>& gold, const std::vector<PredictionRecord>& predictions,
                           const EvalResources& res, const EvalFlags& flags) {
  const auto preds = to_turn_predictions(predictions);
  check_prediction_keys(gold, preds);
  std::map<std::pair<std::string, int>, std::string> asr;
  for (const auto& r : predictions) {
    if (r.asr_hypothesis) asr[{r.dialogue_id, r.turn_index}] = *r.asr_hypothesis;
  }

  EvalReport report;
  report.flags = flags;
  report.resource_digests = res.digests;
  report.dialogue_count = gold.size();
  report.dialogues = parallel_map(gold.size(), flags.threads, [&](std::size_t i) {
    return detail::evaluate_dialogue(gold[i], preds, asr, res, flags);
  });
  std::sort(report.dialogues.begin(), report.dialogues.end(),
            [](const auto& a, const auto& b) { return a.dialogue_id < b.dialogue_id; });

  MatchCounts exact, phon;
  ErrorRateTotals wer, cer;
  std::vector<ValuePair> type1;
  for (const auto& d : report.dialogues) {
    report.turn_count += d.turns;
    if (d.exact) exact += d.exact->counts;
    if (d.phoneme) phon += d.phoneme->counts;
    report.errors += d.errors;
    report.answer_types += d.answer_types;
    type1.insert(type1.end(), d.type1.begin(), d.type1.end());
    wer.edits += d.wer.edits;
    wer.reference_length += d.wer.reference_length;
    wer.lines += d.wer.lines;
    cer.edits += d.cer.edits;
    cer.reference_length += d.cer.reference_length;
    cer.lines += d.cer.lines;
    report.warnings.insert(report.warnings.end(), d.warnings.begin(), d.warnings.end());
  }
  if (flags.mode != ScoreMode::phoneme) report.exact = ScoreBlock{exact, f1_from_counts(exact)};
  if (flags.mode != ScoreMode::exact) report.phoneme = ScoreBlock{phon, f1_from_counts(phon)};
  if (wer.lines > 0) {
    report.wer = wer;
    report.cer = cer;
  }
  report.type1_pairs = type1.size();
  report.near_miss_rate = near_miss_rate(type1, flags.near_miss_threshold, res.phonetics);
  return report;
}

namespace detail {

inline nlohmann::json to_json(const MatchCounts& c) {
  return {{"tp", c.tp},         {"fp", c.fp},           {"fn", c.fn},
          {"common", c.common}, {"pred_total", c.pred_total}, {"gold_total", c.gold_total}};
}

inline nlohmann::json to_json(const ScoreBlock& b) {
  return {{"counts", to_json(b.counts)},
          {"precision", b.score.precision},
          {"recall", b.score.recall},
          {"f1", b.score.f1}};
}

inline nlohmann::json to_json(const ErrorBreakdown& e) {
  const auto total = e.total_errors();
  auto share = [total](std::size_t n) { return total ? static_cast<double>(n) / static_cast<double>(total) : 0.0; };
  return {{"type1", e.type1},
          {"type2", e.type2},
          {"type3", e.type3},
          {"total", total},
          {"share", {{"type1", share(e.type1)}, {"type2", share(e.type2)}, {"type3", share(e.type3)}}}};
}

inline nlohmann::json to_json(const AnswerTypeReport& r) {
  nlohmann::json j = nlohmann::json::object();
  for (auto t : kAnswerTypes) {
    const auto& cell = r[t];
    j[std::string(to_string(t))] = {
        {"correct", cell.correct}, {"total", cell.total}, {"accuracy", cell.accuracy()}, {"share", r.share(t)}};
  }
  return j;
}

inline nlohmann::json to_json(const ErrorRateTotals& t) {
  return {{"edits", t.edits}, {"reference_length", t.reference_length}, {"lines", t.lines}, {"rate", t.rate()}};
}

}  // namespace detail

/// Machine-readable report. Keys are sorted, so equal reports serialize to
/// equal bytes. `include_scores` false drops the F1 and WER blocks (the
/// analyze view).
inline nlohmann::json report_to_json(const EvalReport& r, bool include_scores = true) {
  using detail::to_json;
  nlohmann::json j;
  j["metadata"] = {{"inputs", r.input_digests},
                   {"resources", r.resource_digests},
                   {"flags",
                    {{"mode", std::string(to_string(r.flags.mode))},
                     {"near_miss_threshold", r.flags.near_miss_threshold},
                     {"pre_accumulated", r.flags.pre_accumulated}}},
                   {"dialogues", r.dialogue_count},
                   {"turns", r.turn_count}};
  if (include_scores) {
    if (r.exact) j["f1"] = to_json(*r.exact);
    if (r.phoneme) j["phoneme_f1"] = to_json(*r.phoneme);
    if (r.wer) j["wer"] = to_json(*r.wer);
    if (r.cer) j["cer"] = to_json(*r.cer);
  }
  j["errors"] = to_json(r.errors);
  j["answer_types"] = to_json(r.answer_types);
  j["near_miss"] = {{"threshold", r.flags.near_miss_threshold},
                    {"type1_pairs", r.type1_pairs},
                    {"rate", r.near_miss_rate}};
  auto rows = nlohmann::json::array();
  for (const auto& d : r.dialogues) {
    nlohmann::json row = {{"dialogue_id", d.dialogue_id}, {"turns", d.turns}, {"errors", to_json(d.errors)}};
    if (include_scores) {
      if (d.exact) row["f1"] = to_json(*d.exact);
      if (d.phoneme) row["phoneme_f1"] = to_json(*d.phoneme);
    }
    rows.push_back(std::move(row));
  }
  j["dialogues"] = std::move(rows);
  j["warnings"] = r.warnings;
  return j;
}

/// Aligned plain-text summary; scores are percentages with two decimals.
inline std::string report_to_text(const EvalReport& r, bool include_scores = true) {
  std::ostringstream os;
  char line[160];
  os << "dialogues: " << r.dialogue_count << "  turns: " << r.turn_count << "  mode: " << to_string(r.flags.mode)
     << (r.flags.pre_accumulated ? "  (pre-accumulated predictions)" : "") << "\n";
  if (include_scores && (r.exact || r.phoneme)) {
    os << "\n";
    std::snprintf(line, sizeof line, "%-11s %9s %9s %9s %10s %6s %6s\n", "metric", "precision", "recall", "score",
                  "tp", "fp", "fn");
    os << line;
    auto row = [&](const char* name, const ScoreBlock& b) {
      std::snprintf(line, sizeof line, "%-11s %9s %9s %9s %10.4f %6zu %6zu\n", name,
                    detail::percent(b.score.precision).c_str(), detail::percent(b.score.recall).c_str(),
                    detail::percent(b.score.f1).c_str(), b.counts.tp, b.counts.fp, b.counts.fn);
      os << line;
    };
    if (r.exact) row("F1", *r.exact);
    if (r.phoneme) row("PhonemeF1", *r.phoneme);
  }
  if (include_scores && r.wer) {
    os << "\n";
    std::snprintf(line, sizeof line, "%-11s %9s %9s\n", "asr", "WER", "CER");
    os << line;
    std::snprintf(line, sizeof line, "%-11s %9s %9s\n", "user turns", detail::percent(r.wer->rate()).c_str(),
                  detail::percent(r.cer->rate()).c_str());
    os << line;
  }
  os << "\n";
  std::snprintf(line, sizeof line, "%-11s %8s %8s\n", "error type", "count", "share");
  os << line;
  const auto total = r.errors.total_errors();
  auto share = [total](std::size_t n) { return total ? static_cast<double>(n) / static_cast<double>(total) : 0.0; };
  const std::pair<const char*, std::size_t> kinds[] = {
      {"type 1", r.errors.type1}, {"type 2", r.errors.type2}, {"type 3", r.errors.type3}};
  for (const auto& [name, n] : kinds) {
    std::snprintf(line, sizeof line, "%-11s %8zu %7s%%\n", name, n, detail::percent(share(n)).c_str());
    os << line;
  }
  std::snprintf(line, sizeof line, "near misses (d < %g): %s%% of %zu type 1 errors\n", r.flags.near_miss_threshold,
                detail::percent(r.near_miss_rate).c_str(), r.type1_pairs);
  os << line << "\n";
  std::snprintf(line, sizeof line, "%-11s %8s %8s %9s %8s\n", "answer type", "correct", "total", "accuracy", "share");
  os << line;
  for (auto t : kAnswerTypes) {
    const auto& cell = r.answer_types[t];
    std::snprintf(line, sizeof line, "%-11s %8zu %8zu %9s %7s%%\n", std::string(to_string(t)).c_str(), cell.correct,
                  cell.total, detail::percent(cell.accuracy()).c_str(), detail::percent(r.answer_types.share(t)).c_str());
    os << line;
  }
  if (!r.warnings.empty()) os << "\nwarnings: " << r.warnings.size() << " value(s) scored without phonetic credit\n";
  return os.str();
}

/// Loads everything, evaluates, and records input digests.
inline EvalReport run_evaluate(const std::filesystem::path& gold_path, const std::filesystem::path& pred_path,
                               const ResourcePaths& resource_paths, const EvalFlags& flags) {
  const auto gold_text = detail::read_input_file(gold_path);
  const auto pred_text = detail::read_input_file(pred_path);
  std::vector<std::string> problems;
  std::vector<Dialogue> gold;
  std::vector<PredictionRecord> preds;
  try {
    gold = parse_dialogues(gold_text, gold_path.string());
  } catch (const IngestionError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  try {
    preds = parse_predictions(pred_text, pred_path.string());
  } catch (const IngestionError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  if (!problems.empty()) throw IngestionError(std::move(problems));
  const auto res = EvalResources::load(resource_paths);
  auto report = evaluate(gold, preds, res, flags);
  report.input_digests["gold"] = detail::sha256_hex(gold_text);
  report.input_digests["pred"] = detail::sha256_hex(pred_text);
  return report;
}

namespace detail {

inline bool is_json_path(const std::filesystem::path& p) {
  auto ext = to_lower_ascii(p.extension().string());
  return ext == ".json";
}

}  // namespace detail

/// Normalizes plain text (one utterance per line) or a gold dialogue JSON
/// (its "system" and "user" fields). Line structure, including a missing
/// final newline, is preserved for text input; JSON keeps its key order.
inline std::string normalize_document(std::string_view content, bool json, const Normalizer& normalizer) {
  if (!json) {
    std::string out;
    out.reserve(content.size());
    std::size_t start = 0;
    while (start < content.size()) {
      auto end = content.find('\n', start);
      const bool has_newline = end != std::string_view::npos;
      if (!has_newline) end = content.size();
      out += normalizer(content.substr(start, end - start));
      if (has_newline) out += '\n';
      start = end + 1;
    }
    return out;
  }
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError({std::string("invalid JSON: ") + e.what()});
  }
  if (doc.is_object() && doc.contains("dialogues") && doc["dialogues"].is_array()) {
    for (auto& d : doc["dialogues"]) {
      if (!d.is_object() || !d.contains("turns") || !d["turns"].is_array()) continue;
      for (auto& t : d["turns"]) {
        if (!t.is_object()) continue;
        for (const char* field : {"system", "user"}) {
          if (t.contains(field) && t[field].is_string()) t[field] = normalizer(t[field].get<std::string>());
        }
      }
    }
  }
  return doc.dump(2) + "\n";
}

inline void run_normalize(const std::filesystem::path& in_path, const std::filesystem::path& out_path,
                          const Normalizer& normalizer) {
  const auto content = detail::read_input_file(in_path);
  detail::write_text_file(out_path, normalize_document(content, detail::is_json_path(in_path), normalizer));
}

enum class ErrorRateLevel { word, character };

struct WerRow {
  std::string key;
  ErrorRateResult result;
};

struct WerTable {
  std::vector<WerRow> rows;
  ErrorRateTotals totals;
};

inline ErrorRateResult score_line(std::string_view ref, std::string_view hyp, ErrorRateLevel level) {
  const auto r = canonicalize_for_scoring(ref);
  const auto h = canonicalize_for_scoring(hyp);
  return level == ErrorRateLevel::word ? word_error_rate(r, h) : char_error_rate(r, h);
}

/// Line-aligned texts, or keyed JSON lines ({"id": ..., "text": ...}) when
/// both inputs are .jsonl; keyed rows come out in reference order.
inline WerTable compute_wer_table(std::string_view ref_text, std::string_view hyp_text, bool keyed,
                                  ErrorRateLevel level) {
  WerTable table;
  if (!keyed) {
    std::vector<std::string> ref = detail::split_lines(std::string(ref_text));
    std::vector<std::string> hyp = detail::split_lines(std::string(hyp_text));
    if (ref.size() != hyp.size()) {
      throw IngestionError({"line count mismatch: reference has " + std::to_string(ref.size()) +
                            " lines, hypothesis has " + std::to_string(hyp.size())});
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
      table.rows.push_back({std::to_string(i + 1), score_line(ref[i], hyp[i], level)});
      table.totals.add(table.rows.back().result);
    }
    return table;
  }
  auto parse = [](std::string_view text, const char* side, std::vector<std::string>& problems) {
    std::vector<std::pair<std::string, std::string>> rows;
    const auto lines = detail::split_lines(std::string(text));
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (detail::trim(lines[n]).empty()) continue;
      const auto where = std::string(side) + ":" + std::to_string(n + 1);
      try {
        auto j = nlohmann::json::parse(lines[n]);
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("text") ||
            !j["text"].is_string()) {
          problems.push_back(where + ": expected {\"id\": str, \"text\": str}");
          continue;
        }
        rows.emplace_back(j["id"].get<std::string>(), j["text"].get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        problems.push_back(where + ": malformed JSON: " + e.what());
      }
    }
    return rows;
  };
  std::vector<std::string> problems;
  const auto ref = parse(ref_text, "reference", problems);
  const auto hyp = parse(hyp_text, "hypothesis", problems);
  std::map<std::string, std::string> hyp_by_id;
  for (const auto& [id, text] : hyp) {
    if (!hyp_by_id.emplace(id, text).second) problems.push_back("hypothesis: duplicate id '" + id + "'");
  }
  std::map<std::string, bool> ref_ids;
  for (const auto& [id, text] : ref) {
    if (!ref_ids.emplace(id, true).second) problems.push_back("reference: duplicate id '" + id + "'");
    if (!hyp_by_id.count(id)) problems.push_back("hypothesis: missing id '" + id + "'");
  }
  for (const auto& [id, text] : hyp_by_id) {
    if (!ref_ids.count(id)) problems.push_back("reference: missing id '" + id + "'");
  }
  if (ref.size() != hyp.size()) {
    problems.push_back("record count mismatch: reference has " + std::to_string(ref.size()) +
                       ", hypothesis has " + std::to_string(hyp.size()));
  }
  if (!problems.empty()) throw IngestionError(std::move(problems));
  for (const auto& [id, text] : ref) {
    table.rows.push_back({id, score_line(text, hyp_by_id.at(id), level)});
    table.totals.add(table.rows.back().result);
  }
  return table;
}

inline WerTable run_wer(const std::filesystem::path& ref_path, const std::filesystem::path& hyp_path,
                        ErrorRateLevel level) {
  const bool keyed = detail::to_lower_ascii(ref_path.extension().string()) == ".jsonl" &&
                     detail::to_lower_ascii(hyp_path.extension().string()) == ".jsonl";
  return compute_wer_table(detail::read_input_file(ref_path), detail::read_input_file(hyp_path), keyed, level);
}

/// Per-line rows then the corpus rate, percentages with two decimals. Lines
/// with an empty reference are marked '*'.
inline std::string wer_table_to_text(const WerTable& t, ErrorRateLevel level) {
  std::ostringstream os;
  char line[200];
  const char* name = level == ErrorRateLevel::word ? "WER" : "CER";
  std::snprintf(line, sizeof line, "%-16s %8s %6s %6s %6s %9s\n", "line", "ref_len", "sub", "ins", "del", name);
  os << line;
  for (const auto& row : t.rows) {
    const auto& r = row.result;
    std::snprintf(line, sizeof line, "%-16s %8zu %6zu %6zu %6zu %9s%s\n", row.key.c_str(), r.reference_length,
                  r.substitutions, r.insertions, r.deletions, detail::percent(r.rate).c_str(),
                  r.empty_reference ? "*" : "");
    os << line;
  }
  std::snprintf(line, sizeof line, "%-16s %8zu %20zu %9s\n", "corpus", t.totals.reference_length, t.totals.edits,
                detail::percent(t.totals.rate()).c_str());
  os << line;
  return os.str();
}

inline nlohmann::json wer_table_to_json(const WerTable& t, ErrorRateLevel level) {
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    const auto& r = row.result;
    rows.push_back({{"key", row.key},
                    {"substitutions", r.substitutions},
                    {"insertions", r.insertions},
                    {"deletions", r.deletions},
                    {"reference_length", r.reference_length},
                    {"rate", r.rate},
                    {"empty_reference", r.empty_reference}});
  }
  return {{"level", level == ErrorRateLevel::word ? "word" : "char"},
          {"rows", rows},
          {"corpus", detail::to_json(t.totals)}};
}

}  // namespace spokendst

#endif  // SPOKENDST_HARNESS_HPP
