// Copyright 2026 The Stackrel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "stackrel/eval.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "stackrel/errors.h"
#include "stackrel/rng.h"
#include "stackrel/scenesim.h"

namespace stackrel {
namespace {

PairLabels RandomLabels(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> cls(0, 2);
  PairLabels out;
  for (std::size_t i = 0; i < n; ++i) {
    out[{static_cast<ObjectId>(i), static_cast<ObjectId>(i + 1)}] =
        static_cast<RelationClass>(cls(rng));
  }
  return out;
}

TEST(ClassCountsTest, ZeroOverZeroIsOne) {
  const ClassCounts empty;
  EXPECT_EQ(empty.precision(), 1.0);
  EXPECT_EQ(empty.recall(), 1.0);
  const ClassCounts c{3, 1, 2};
  EXPECT_DOUBLE_EQ(c.precision(), 0.75);
  EXPECT_DOUBLE_EQ(c.recall(), 0.6);
  EXPECT_EQ((ClassCounts{0, 4, 0}).precision(), 0.0);
}

TEST(PairwiseMetricsTest, MatchesCountingOracle) {
  Rng rng = MakeRng(1, "metrics");
  for (int trial = 0; trial < 10; ++trial) {
    const PairLabels truth = RandomLabels(1000, rng);
    const PairLabels pred = RandomLabels(1000, rng);
    int tp[3] = {}, fp[3] = {}, fn[3] = {};
    for (const auto& [key, t] : truth) {
      const int ti = static_cast<int>(t);
      const int pi = static_cast<int>(pred.at(key));
      if (ti == pi) {
        ++tp[ti];
      } else {
        ++fp[pi];
        ++fn[ti];
      }
    }
    const ClassMetrics m = PairwiseMetrics(pred, truth);
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(m.classes[c].tp, static_cast<std::size_t>(tp[c]));
      EXPECT_EQ(m.classes[c].fp, static_cast<std::size_t>(fp[c]));
      EXPECT_EQ(m.classes[c].fn, static_cast<std::size_t>(fn[c]));
    }
  }
}

TEST(PairwiseMetricsTest, PerfectAndAllNoRelPredictions) {
  Rng rng = MakeRng(2, "metrics");
  const PairLabels truth = RandomLabels(200, rng);
  const ClassMetrics perfect = PairwiseMetrics(truth, truth);
  for (const ClassCounts& c : perfect.classes) {
    EXPECT_EQ(c.precision(), 1.0);
    EXPECT_EQ(c.recall(), 1.0);
  }
  PairLabels none = truth;
  for (auto& [key, label] : none) label = RelationClass::kNoRel;
  const ClassMetrics m = PairwiseMetrics(none, truth);
  EXPECT_EQ(m[RelationClass::kParent].recall(), 0.0);
  EXPECT_EQ(m[RelationClass::kChild].recall(), 0.0);
}

TEST(PairwiseMetricsTest, KeyMismatchThrows) {
  Rng rng = MakeRng(3, "metrics");
  const PairLabels truth = RandomLabels(10, rng);
  PairLabels pred = truth;
  pred.erase(pred.begin());
  try {
    PairwiseMetrics(pred, truth);
    FAIL() << "expected key-mismatch";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.check(), "key-mismatch");
  }
}

TEST(GraphToPairLabelsTest, ExpandsEdges) {
  PairLabels truth;
  for (ObjectId a : {1, 2, 3}) {
    for (ObjectId b : {1, 2, 3}) {
      if (a != b) truth[{a, b}] = RelationClass::kNoRel;
    }
  }
  ManipulationGraph g;
  g.nodes = {1, 2, 3};
  g.edges = {{2, 3, 0.9}};
  const PairLabels p = GraphToPairLabels(g, truth);
  EXPECT_EQ(p.size(), truth.size());
  EXPECT_EQ(p.at({2, 3}), RelationClass::kParent);
  EXPECT_EQ(p.at({3, 2}), RelationClass::kChild);
  EXPECT_EQ(p.at({1, 2}), RelationClass::kNoRel);
}

TEST(SceneAccuracyTest, StrictConjunction) {
  const EdgeSet truth = {{1, 2}, {2, 3}};
  std::vector<SceneOutcome> scenes = {{truth, truth, 3},
                                      {{{1, 2}}, truth, 3},
                                      {{{1, 2}, {2, 3}, {1, 3}}, truth, 4},
                                      {{{2, 1}, {2, 3}}, truth, 4}};
  const SceneAccuracyReport r = SceneAccuracy(scenes);
  EXPECT_EQ(r.overall, (AccuracyCount{1, 4}));
  EXPECT_EQ(r.by_object_count.at(3), (AccuracyCount{1, 2}));
  EXPECT_EQ(r.by_object_count.at(4), (AccuracyCount{0, 2}));
  EXPECT_DOUBLE_EQ(r.overall.ratio(), 0.25);
}

TEST(SceneAccuracyTest, AddingAWrongEdgeNeverHelps) {
  Rng rng = MakeRng(4, "sa");
  std::uniform_int_distribution<ObjectId> id(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    EdgeSet truth;
    for (int e = 0; e < 4; ++e) {
      const ObjectId a = id(rng);
      const ObjectId b = id(rng);
      if (a != b) truth.insert({a, b});
    }
    std::vector<SceneOutcome> scenes = {{truth, truth, 8}};
    const double before = SceneAccuracy(scenes).overall.ratio();
    ObjectId a = id(rng);
    ObjectId b = id(rng);
    if (a == b || truth.contains({a, b})) continue;
    scenes[0].predicted.insert({a, b});
    EXPECT_LE(SceneAccuracy(scenes).overall.ratio(), before);
  }
}

TEST(SceneAccuracyTest, OraclePredictorIsPerfectInEveryBucket) {
  SceneConfig c;
  c.points_per_object = 4;
  c.max_objects = 15;
  c.seed = 5;
  std::vector<SceneOutcome> scenes;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Scene s = GenerateScene(c, i).scene;
    scenes.push_back({ParentEdges(s), ParentEdges(s), s.objects.size()});
  }
  const SceneAccuracyReport r = SceneAccuracy(scenes);
  EXPECT_EQ(r.overall, (AccuracyCount{100, 100}));
  for (const auto& [n, count] : r.by_object_count) EXPECT_EQ(count.ratio(), 1.0) << n;
}

TEST(DifficultyTest, BoundariesAndPartition) {
  EXPECT_EQ(DifficultyOf(0), Difficulty::kSimple);
  EXPECT_EQ(DifficultyOf(5), Difficulty::kSimple);
  EXPECT_EQ(DifficultyOf(6), Difficulty::kMiddle);
  EXPECT_EQ(DifficultyOf(10), Difficulty::kMiddle);
  EXPECT_EQ(DifficultyOf(11), Difficulty::kHard);

  SceneConfig c;
  c.points_per_object = 4;
  c.min_objects = 2;
  c.max_objects = 15;
  c.stack_probability = 0.9;
  c.seed = 6;
  std::vector<Scene> scenes;
  for (std::uint64_t i = 0; i < 200; ++i) scenes.push_back(GenerateScene(c, i).scene);
  const DifficultyBands bands = DifficultySplit(scenes);
  std::vector<int> hits(scenes.size(), 0);
  for (const auto* band : {&bands.simple, &bands.middle, &bands.hard}) {
    for (std::size_t i : *band) ++hits[i];
  }
  for (int h : hits) EXPECT_EQ(h, 1);
  for (std::size_t i : bands.middle) {
    EXPECT_EQ(DifficultyOf(scenes[i].StackedPairCount()), Difficulty::kMiddle);
  }
}

// Deterministic report from generated scenes and a corrupted oracle.
EvalReport FixedReport() {
  SceneConfig c;
  c.points_per_object = 4;
  c.seed = 2026;
  Rng rng = MakeRng(2026, "corrupt");
  std::bernoulli_distribution drop(0.3);
  EvalReport report;
  for (const char* split : {"seen", "unseen"}) {
    SplitReport& out = report.splits[split];
    std::vector<SceneOutcome> outcomes;
    for (std::uint64_t i = 0; i < 12; ++i) {
      const Scene s = GenerateScene(c, i).scene;
      ManipulationGraph g;
      g.scene_id = s.scene_id;
      for (const ObjectCloud& o : s.objects) g.nodes.push_back(o.id);
      for (const OrderedPair& e : ParentEdges(s)) {
        if (!drop(rng)) g.edges.push_back({e.first, e.second, 1.0});
      }
      const ClassMetrics m = PairwiseMetrics(GraphToPairLabels(g, s.labels), s.labels);
      out.metrics += m;
      out.difficulty[DifficultyOf(s.StackedPairCount())] += m;
      outcomes.push_back({ParentEdges(g), ParentEdges(s), s.objects.size()});
    }
    out.scene_accuracy = SceneAccuracy(outcomes);
  }
  return report;
}

TEST(ReportTest, EmptyReportIsHeadersOnly) {
  const std::string text = ReportToText(EvalReport{});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find("recall"), std::string::npos);
  EXPECT_EQ(ReportToJson(EvalReport{}), "{\n  \"splits\": {}\n}\n");
}

TEST(ReportTest, DeterministicAndMatchesGolden) {
  const EvalReport report = FixedReport();
  const std::string text = ReportToText(report);
  const std::string json = ReportToJson(report);
  EXPECT_EQ(text, ReportToText(FixedReport()));
  EXPECT_EQ(json, ReportToJson(FixedReport()));

  const std::filesystem::path dir = STACKREL_GOLDEN_DIR;
  if (std::getenv("STACKREL_UPDATE_GOLDEN")) {
    std::ofstream(dir / "report.txt", std::ios::binary) << text;
    std::ofstream(dir / "report.json", std::ios::binary) << json;
  }
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(text, read(dir / "report.txt"));
  EXPECT_EQ(json, read(dir / "report.json"));
}

}  // namespace
}  // namespace stackrel
