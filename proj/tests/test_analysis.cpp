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

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "spokendst/analysis.hpp"

namespace spokendst {
namespace {

using testutil::dialogue;
using testutil::state;

const PhoneticResources& res() {
  static const PhoneticResources r = PhoneticResources::load_default();
  return r;
}

const SlotOntology& ontology() {
  static const SlotOntology o = SlotOntology::load(data_dir() / "ontology.json");
  return o;
}

TEST(ClassifyErrors, Examples) {
  const auto gold = state({{"taxi-departure", "stevanage"}, {"taxi-destination", "museum"}, {"taxi-bookpeople", "1"}});
  const auto pred = state({{"taxi-departure", "stevanase"}, {"taxi-destination", "museum"}, {"taxi-leaveat", "10:00"}});
  const auto b = classify_errors(gold, pred);
  EXPECT_EQ(b.type1, 1u);
  EXPECT_EQ(b.type2, 1u);
  EXPECT_EQ(b.type3, 1u);
  EXPECT_EQ(type1_pairs(gold, pred), (std::vector<ValuePair>{{"stevanage", "stevanase"}}));
  EXPECT_EQ(classify_errors(gold, gold).total_errors(), 0u);
}

TEST(ClassifyErrors, IdentitiesOnRandomStates) {
  std::mt19937 rng(71);
  for (int i = 0; i < 1000; ++i) {
    const auto [gold, pred] = testutil::random_state_pair(rng);
    const auto b = classify_errors(gold, pred);
    const auto c = exact_match_counts(gold, pred);
    ASSERT_EQ(b.type1 + b.type2, c.fn);
    ASSERT_EQ(b.type1 + b.type3, c.fp);
    ASSERT_EQ(type1_pairs(gold, pred).size(), b.type1);
  }
}

TEST(NearMiss, Examples) {
  const std::vector<ValuePair> pairs = {{"golden wok", "gordon wok"}, {"cambridge", "north"}};
  EXPECT_DOUBLE_EQ(near_miss_rate(pairs, kDefaultNearMissThreshold, res()), 0.5);
  EXPECT_EQ(near_miss_rate({}, kDefaultNearMissThreshold, res()), 0.0);
  EXPECT_EQ(near_miss_rate(pairs, 0.0, res()), 0.0);
  EXPECT_EQ(near_miss_rate(pairs, 1.01, res()), 1.0);
}

TEST(NearMiss, DontCareIsNeverNear) {
  const std::vector<ValuePair> pairs = {{"dontcare", "north"}};
  EXPECT_EQ(near_miss_rate(pairs, 0.5, res()), 0.0);
}

TEST(NearMiss, RecoversPlantedFraction) {
  for (std::size_t planted : {0u, 5u, 12u}) {
    const auto set = testutil::planted_near_misses(res(), kDefaultNearMissThreshold, planted);
    ASSERT_TRUE(set.problems.empty()) << set.problems.front();
    ASSERT_EQ(set.pairs.size(), 100u);
    EXPECT_DOUBLE_EQ(near_miss_rate(set.pairs, kDefaultNearMissThreshold, res()),
                     static_cast<double>(planted) / 100.0);
  }
}

TEST(AnswerTypes, Examples) {
  const auto& o = ontology();
  EXPECT_EQ(answer_type_of(SlotName::parse("restaurant-name"), "golden wok", o), AnswerType::name);
  EXPECT_EQ(answer_type_of(SlotName::parse("hotel-area"), "north", o), AnswerType::categorical);
  EXPECT_EQ(answer_type_of(SlotName::parse("hotel-bookpeople"), "2", o), AnswerType::number);
  EXPECT_EQ(answer_type_of(SlotName::parse("hotel-bookpeople"), "two", o), AnswerType::number);
  EXPECT_EQ(answer_type_of(SlotName::parse("train-leaveat"), "15:30", o), AnswerType::time);
  EXPECT_EQ(answer_type_of(SlotName::parse("unknown-slot"), "9:05", o), AnswerType::time);
  EXPECT_EQ(answer_type_of(SlotName::parse("unknown-slot"), "whatever", o), AnswerType::name);
  EXPECT_EQ(to_string(AnswerType::categorical), "categorical");
}

TEST(AnswerTypes, ToyCorpusReport) {
  const std::vector<Dialogue> ds = {
      dialogue("a", {state({{"hotel-area", "north"}, {"hotel-name", "acorn guest house"}}),
                     state({{"hotel-bookpeople", "2"}, {"train-leaveat", "15:30"}})})};
  TurnPredictions preds;
  preds["a"][1] = state({{"hotel-area", "north"}, {"hotel-name", "a corn guest house"}});
  preds["a"][2] = state({{"hotel-bookpeople", "3"}, {"train-leaveat", "15:30"}});
  const auto r = per_type_accuracy(ds, preds, ontology());
  // Turn one: area, name. Turn two (accumulated): area, name, people, time.
  EXPECT_EQ(r[AnswerType::categorical].total, 2u);
  EXPECT_EQ(r[AnswerType::categorical].correct, 2u);
  EXPECT_EQ(r[AnswerType::name].total, 2u);
  EXPECT_EQ(r[AnswerType::name].correct, 0u);
  EXPECT_EQ(r[AnswerType::number].total, 1u);
  EXPECT_EQ(r[AnswerType::number].correct, 0u);
  EXPECT_EQ(r[AnswerType::time].correct, 1u);
  EXPECT_EQ(r.gold_total(), 6u);
  EXPECT_DOUBLE_EQ(r.share(AnswerType::name), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(r[AnswerType::categorical].accuracy(), 1.0);
}

TEST(AnswerTypes, ReportSumsToGoldPairs) {
  std::mt19937 rng(73);
  for (int i = 0; i < 500; ++i) {
    const auto [gold, pred] = testutil::random_state_pair(rng);
    const auto r = answer_types(gold, pred, ontology());
    ASSERT_EQ(r.gold_total(), gold.size());
    std::size_t correct = 0;
    for (auto t : kAnswerTypes) correct += r[t].correct;
    ASSERT_EQ(correct, exact_match_counts(gold, pred).common);
  }
}

TEST(Ontology, LoaderErrors) {
  auto write = [](const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / "spokendst_ontology.json";
    std::ofstream(path) << content;
    return path;
  };
  EXPECT_THROW(SlotOntology::load(write("[]")), ResourceError);
  EXPECT_THROW(SlotOntology::load(write("{not json")), ResourceError);
  EXPECT_THROW(SlotOntology::load(write(R"({"hotel-area": {"kind": "weird"}})")), ResourceError);
  EXPECT_THROW(SlotOntology::load(write(R"({"hotel-area": {"kind": "closed_set"}})")), ResourceError);
  EXPECT_THROW(SlotOntology::load(write(R"({"hotelarea": {"kind": "time"}})")), ResourceError);
  EXPECT_THROW(SlotOntology::load("/nonexistent/ontology.json"), ResourceError);
  EXPECT_EQ(SlotOntology::load(write(R"({"Hotel-Area": {"kind": "closed_set", "values": ["North"]}})")).size(), 1u);
}

}  // namespace
}  // namespace spokendst
