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

// Runs the built command-line tool as a subprocess.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = SPOKENDST_FIXTURES;

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("spokendst_cli_") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  /// Exit status of `spokendst <args>`, stdout and stderr captured to files.
  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + SPOKENDST_CLI + "\" " + args + " >\"" + (dir / "out.txt").string() +
                            "\" 2>\"" + (dir / "err.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  std::string out() const { return read(dir / "out.txt"); }
  std::string err() const { return read(dir / "err.txt"); }

  fs::path write(const std::string& name, const std::string& content) const {
    std::ofstream(dir / name, std::ios::binary) << content;
    return dir / name;
  }

  static std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }
};

TEST_F(Cli, EvaluateWorkedExample) {
  const auto report = dir / "report.json";
  ASSERT_EQ(run("evaluate --gold " + q(kFixtures / "worked_gold.json") + " --pred " +
                q(kFixtures / "worked_pred.jsonl") + " --report " + q(report)),
            0)
      << err();
  const auto j = nlohmann::json::parse(read(report));
  EXPECT_DOUBLE_EQ(j["f1"]["f1"].get<double>(), 2.0 / 7.0);
  EXPECT_GT(j["phoneme_f1"]["f1"].get<double>(), j["f1"]["f1"].get<double>());
  EXPECT_EQ(j["dialogues"][0]["dialogue_id"], "row1");
  EXPECT_NE(out().find("dialogues: 2"), std::string::npos);
}

TEST_F(Cli, QuietPrintsNothing) {
  ASSERT_EQ(run("evaluate -q --mode exact --gold " + q(kFixtures / "worked_gold.json") + " --pred " +
                q(kFixtures / "worked_pred.jsonl")),
            0);
  EXPECT_TRUE(out().empty());
}

TEST_F(Cli, ParallelReportIsByteIdentical) {
  const std::string common = "evaluate -q --gold " + q(kFixtures / "corpus_gold.json") + " --pred " +
                             q(kFixtures / "corpus_pred.jsonl");
  ASSERT_EQ(run(common + " -j 1 --report " + q(dir / "a.json")), 0) << err();
  ASSERT_EQ(run(common + " -j 4 --report " + q(dir / "b.json")), 0) << err();
  EXPECT_EQ(read(dir / "a.json"), read(dir / "b.json"));
}

TEST_F(Cli, AnalyzeOmitsScores) {
  ASSERT_EQ(run("analyze -q --gold " + q(kFixtures / "worked_gold.json") + " --pred " +
                q(kFixtures / "worked_pred.jsonl") + " --report " + q(dir / "r.json")),
            0)
      << err();
  const auto j = nlohmann::json::parse(read(dir / "r.json"));
  EXPECT_FALSE(j.contains("f1"));
  EXPECT_FALSE(j.contains("phoneme_f1"));
  EXPECT_EQ(j["errors"]["type1"], 2);
  EXPECT_TRUE(j.contains("answer_types"));
}

TEST_F(Cli, IngestionFailureExitsOne) {
  const auto gold = write("g.json", R"({"dialogues": [{"dialogue_id": "a", "turns": [{"turn": 1, "user": "x"}, {"turn": 3, "user": "y"}]}]})");
  const auto pred = write("p.jsonl", "{\"dialogue_id\": \"a\", \"turn\": 1}\n");
  EXPECT_EQ(run("evaluate --gold " + q(gold) + " --pred " + q(pred)), 1);
  EXPECT_NE(err().find("expected 2, got 3"), std::string::npos);
}

TEST_F(Cli, UnknownDialogueExitsOne) {
  const auto pred = write("p.jsonl", "{\"dialogue_id\": \"ghost\", \"turn\": 1}\n");
  EXPECT_EQ(run("evaluate --gold " + q(kFixtures / "worked_gold.json") + " --pred " + q(pred)), 1);
  EXPECT_NE(err().find("ghost"), std::string::npos);
}

TEST_F(Cli, ResourceFailureExitsTwo) {
  const auto features = write("features.tsv", "symbol\ta\nX\t+\nY\t+\n");
  EXPECT_EQ(run("evaluate --gold " + q(kFixtures / "worked_gold.json") + " --pred " +
                q(kFixtures / "worked_pred.jsonl") + " --features " + q(features)),
            2);
  EXPECT_EQ(run("evaluate --gold " + q(kFixtures / "worked_gold.json") + " --pred " +
                q(kFixtures / "worked_pred.jsonl") + " --lexicon " + q(dir / "missing.dict")),
            2);
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("evaluate --gold " + q(kFixtures / "worked_gold.json")), 1);
  EXPECT_EQ(run("evaluate --mode fuzzy --gold " + q(kFixtures / "worked_gold.json") + " --pred " +
                q(kFixtures / "worked_pred.jsonl")),
            1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, NormalizeText) {
  const auto in = write("in.txt", "I need a table for 2 at 15:30\npostcode cb17ag\n");
  ASSERT_EQ(run("normalize --in " + q(in) + " --out " + q(dir / "out_norm.txt")), 0) << err();
  EXPECT_EQ(read(dir / "out_norm.txt"), "I need a table for two at fifteen thirty\npostcode [number]\n");
}

TEST_F(Cli, NormalizeJson) {
  ASSERT_EQ(run("normalize --in " + q(kFixtures / "worked_gold.json") + " --out " + q(dir / "n.json")), 0) << err();
  const auto j = nlohmann::json::parse(read(dir / "n.json"));
  EXPECT_EQ(j["dialogues"][0]["turns"][0]["user"],
            "I want the taxi to depart from Stevanage to museum for one person.");
}

TEST_F(Cli, NormalizeBadLexiconExitsTwo) {
  const auto lex = write("m.tsv", "a\tb\nb\tc\n");
  const auto in = write("in.txt", "x\n");
  EXPECT_EQ(run("normalize --in " + q(in) + " --out " + q(dir / "o.txt") + " --misspellings " + q(lex)), 2);
}

TEST_F(Cli, WerTable) {
  const auto ref = write("ref.txt", "a b c\nd e\n");
  const auto hyp = write("hyp.txt", "a x c\nd e\n");
  ASSERT_EQ(run("wer --ref " + q(ref) + " --hyp " + q(hyp) + " --report " + q(dir / "w.json")), 0) << err();
  EXPECT_NE(out().find("33.33"), std::string::npos);
  EXPECT_NE(out().find("20.00"), std::string::npos);
  const auto j = nlohmann::json::parse(read(dir / "w.json"));
  EXPECT_EQ(j["corpus"]["edits"], 1);
}

TEST_F(Cli, WerMismatchExitsOne) {
  const auto ref = write("ref.txt", "a\nb\n");
  const auto hyp = write("hyp.txt", "a\n");
  EXPECT_EQ(run("wer --ref " + q(ref) + " --hyp " + q(hyp)), 1);
  EXPECT_NE(err().find("line count mismatch"), std::string::npos);
}

TEST_F(Cli, CerLevel) {
  const auto ref = write("ref.txt", "cat\n");
  const auto hyp = write("hyp.txt", "cut\n");
  ASSERT_EQ(run("wer --level char --ref " + q(ref) + " --hyp " + q(hyp)), 0);
  EXPECT_NE(out().find("CER"), std::string::npos);
  EXPECT_NE(out().find("33.33"), std::string::npos);
}

}  // namespace
