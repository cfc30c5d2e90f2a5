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

// spokendst: batch scoring of dialogue state tracking predictions.
//
//   spokendst evaluate --gold gold.json --pred pred.jsonl [--report out.json]
//   spokendst analyze  --gold gold.json --pred pred.jsonl
//   spokendst normalize --in transcripts.txt --out normalized.txt
//   spokendst wer --ref ref.txt --hyp hyp.txt [--level word|char]
//
// Exit status: 0 success, 1 ingestion/validation failure, 2 resource failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "spokendst/spokendst.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitResource = 2;

struct ScoreOptions {
  std::string gold, pred, report;
  spokendst::ResourcePaths resources;
  std::string mode = "both";
  double near_miss_threshold = spokendst::kDefaultNearMissThreshold;
  bool pre_accumulated = false;
  bool quiet = false;
  unsigned jobs = 1;
};

void add_score_options(CLI::App* cmd, ScoreOptions& o, bool with_mode) {
  cmd->add_option("--gold", o.gold, "Gold dialogues (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--pred", o.pred, "Predictions (JSON lines)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", o.resources.lexicon, "Pronunciation lexicon (CMU format)")->capture_default_str();
  cmd->add_option("--features", o.resources.features, "Phoneme feature table (TSV)")->capture_default_str();
  cmd->add_option("--g2p-rules", o.resources.g2p_rules, "Letter-to-sound rules (TSV)")->capture_default_str();
  cmd->add_option("--ontology", o.resources.ontology, "Slot ontology (JSON)")->capture_default_str();
  if (with_mode) {
    cmd->add_option("--mode", o.mode, "Which F1 variants to compute: exact, phoneme or both")
        ->check(CLI::IsMember({"exact", "phoneme", "both"}))
        ->capture_default_str();
  }
  cmd->add_option("--near-miss-threshold", o.near_miss_threshold, "Phonetic distance below which a wrong value "
                                                                   "counts as a near miss")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--pre-accumulated", o.pre_accumulated, "Predictions are dialogue-level states, not turn-level");
  cmd->add_option("--report", o.report, "Write the JSON report here");
  cmd->add_option("--jobs,-j", o.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  cmd->add_flag("--quiet,-q", o.quiet, "Suppress the text summary");
}

int run_scoring(const ScoreOptions& o, bool include_scores) {
  spokendst::EvalFlags flags;
  const std::map<std::string, spokendst::ScoreMode> modes = {
      {"exact", spokendst::ScoreMode::exact}, {"phoneme", spokendst::ScoreMode::phoneme},
      {"both", spokendst::ScoreMode::both}};
  flags.mode = include_scores ? modes.at(o.mode) : spokendst::ScoreMode::exact;
  flags.near_miss_threshold = o.near_miss_threshold;
  flags.pre_accumulated = o.pre_accumulated;
  flags.threads = o.jobs;
  const auto report = spokendst::run_evaluate(o.gold, o.pred, o.resources, flags);
  const auto json = spokendst::report_to_json(report, include_scores).dump(2) + "\n";
  if (!o.report.empty()) spokendst::detail::write_text_file(o.report, json);
  if (!o.quiet) std::cout << spokendst::report_to_text(report, include_scores);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score spoken dialogue state tracking predictions (F1, PhonemeF1, WER/CER, error analysis)",
               "spokendst"};
  app.require_subcommand(1);

  ScoreOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Corpus F1, PhonemeF1, WER/CER and error analysis");
  add_score_options(evaluate, eval_opts, true);

  ScoreOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "Error types, near misses and per-answer-type accuracy only");
  add_score_options(analyze, analyze_opts, false);

  std::string norm_in, norm_out;
  std::string misspellings = (spokendst::data_dir() / "misspellings.tsv").string();
  std::string reorder = (spokendst::data_dir() / "reorder_rules.tsv").string();
  auto* normalize = app.add_subcommand("normalize", "Normalize transcripts (text lines or dialogue JSON)");
  normalize->add_option("--in", norm_in, "Input file")->required()->check(CLI::ExistingFile);
  normalize->add_option("--out", norm_out, "Output file")->required();
  normalize->add_option("--misspellings", misspellings, "Misspelling lexicon (TSV)")->capture_default_str();
  normalize->add_option("--reorder-rules", reorder, "Word-order rules (TSV)")->capture_default_str();

  std::string wer_ref, wer_hyp, wer_report;
  std::string level_name = "word";
  bool wer_quiet = false;
  auto* wer = app.add_subcommand("wer", "Word or character error rate between aligned files");
  wer->add_option("--ref", wer_ref, "Reference transcripts")->required()->check(CLI::ExistingFile);
  wer->add_option("--hyp", wer_hyp, "Hypothesis transcripts")->required()->check(CLI::ExistingFile);
  wer->add_option("--level", level_name, "word or char")
      ->check(CLI::IsMember({"word", "char"}))
      ->capture_default_str();
  wer->add_option("--report", wer_report, "Write the JSON table here");
  wer->add_flag("--quiet,-q", wer_quiet, "Suppress the text table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*evaluate) return run_scoring(eval_opts, true);
    if (*analyze) return run_scoring(analyze_opts, false);
    if (*normalize) {
      const auto normalizer = spokendst::Normalizer::load(misspellings, reorder);
      spokendst::run_normalize(norm_in, norm_out, normalizer);
      return kExitOk;
    }
    if (*wer) {
      const auto level =
          level_name == "char" ? spokendst::ErrorRateLevel::character : spokendst::ErrorRateLevel::word;
      const auto table = spokendst::run_wer(wer_ref, wer_hyp, level);
      if (!wer_report.empty()) {
        spokendst::detail::write_text_file(wer_report, spokendst::wer_table_to_json(table, level).dump(2) + "\n");
      }
      if (!wer_quiet) std::cout << spokendst::wer_table_to_text(table, level);
      return kExitOk;
    }
  } catch (const spokendst::IngestionError& e) {
    std::cerr << "error: " << e.problems().size() << " problem(s) in the input:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kExitInput;
  } catch (const spokendst::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
