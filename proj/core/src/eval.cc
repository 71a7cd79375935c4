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

#include <cstdio>
#include <nlohmann/json.hpp>

#include "stackrel/errors.h"

namespace stackrel {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

constexpr std::array<std::string_view, kNumRelationClasses> kClassKeys = {"parent", "child",
                                                                          "no_rel"};

void AppendClassTable(std::string& out, const ClassMetrics& m, const std::string& indent) {
  for (int c = 0; c < kNumRelationClasses; ++c) {
    const ClassCounts& k = m.classes[c];
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s%-8s %9.2f %9.2f %7zu %7zu %7zu\n", indent.c_str(),
                  std::string(ToString(static_cast<RelationClass>(c))).c_str(),
                  100.0 * k.recall(), 100.0 * k.precision(), k.tp, k.fp, k.fn);
    out += buf;
  }
}

nlohmann::ordered_json ClassesJson(const ClassMetrics& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (int c = 0; c < kNumRelationClasses; ++c) {
    const ClassCounts& k = m.classes[c];
    j[std::string(kClassKeys[c])] = {{"precision", k.precision()},
                                     {"recall", k.recall()},
                                     {"tp", k.tp},
                                     {"fp", k.fp},
                                     {"fn", k.fn}};
  }
  return j;
}

}  // namespace

double ClassCounts::precision() const { return Ratio(tp, tp + fp); }
double ClassCounts::recall() const { return Ratio(tp, tp + fn); }
double AccuracyCount::ratio() const { return Ratio(correct, total); }

ClassMetrics& ClassMetrics::operator+=(const ClassMetrics& other) {
  for (int c = 0; c < kNumRelationClasses; ++c) {
    classes[c].tp += other.classes[c].tp;
    classes[c].fp += other.classes[c].fp;
    classes[c].fn += other.classes[c].fn;
  }
  return *this;
}

ClassMetrics PairwiseMetrics(const PairLabels& predicted, const PairLabels& truth) {
  if (predicted.size() != truth.size()) {
    throw ValidationError("key-mismatch", "prediction and truth cover different pairs");
  }
  ClassMetrics m;
  auto p = predicted.begin();
  for (auto t = truth.begin(); t != truth.end(); ++t, ++p) {
    if (p->first != t->first) {
      throw ValidationError("key-mismatch",
                            "pair (" + std::to_string(t->first.first) + ", " +
                                std::to_string(t->first.second) + ") missing from predictions");
    }
    if (p->second == t->second) {
      ++m[t->second].tp;
    } else {
      ++m[p->second].fp;
      ++m[t->second].fn;
    }
  }
  return m;
}

PairLabels GraphToPairLabels(const ManipulationGraph& graph, const PairLabels& truth) {
  PairLabels out;
  for (const auto& [pair, unused] : truth) out[pair] = RelationClass::kNoRel;
  for (const GraphEdge& e : graph.edges) {
    auto fwd = out.find({e.parent, e.child});
    auto bwd = out.find({e.child, e.parent});
    if (fwd == out.end() || bwd == out.end()) {
      throw ValidationError("key-mismatch", "graph edge (" + std::to_string(e.parent) + ", " +
                                                std::to_string(e.child) +
                                                ") is not a labeled pair");
    }
    fwd->second = RelationClass::kParent;
    bwd->second = RelationClass::kChild;
  }
  return out;
}

EdgeSet ParentEdges(const ManipulationGraph& graph) {
  EdgeSet s;
  for (const GraphEdge& e : graph.edges) s.insert({e.parent, e.child});
  return s;
}

EdgeSet ParentEdges(const Scene& scene) {
  EdgeSet s;
  for (const auto& [pair, label] : scene.labels) {
    if (label == RelationClass::kParent) s.insert(pair);
  }
  return s;
}

SceneAccuracyReport SceneAccuracy(std::span<const SceneOutcome> scenes) {
  SceneAccuracyReport r;
  for (const SceneOutcome& s : scenes) {
    const bool ok = s.predicted == s.truth;
    AccuracyCount& bucket = r.by_object_count[s.object_count];
    bucket.total += 1;
    r.overall.total += 1;
    if (ok) {
      bucket.correct += 1;
      r.overall.correct += 1;
    }
  }
  return r;
}

std::string_view ToString(Difficulty d) {
  switch (d) {
    case Difficulty::kSimple:
      return "simple";
    case Difficulty::kMiddle:
      return "middle";
    case Difficulty::kHard:
      return "hard";
  }
  return "simple";
}

Difficulty DifficultyOf(std::size_t stacked_pairs) {
  if (stacked_pairs <= 5) return Difficulty::kSimple;
  if (stacked_pairs <= 10) return Difficulty::kMiddle;
  return Difficulty::kHard;
}

DifficultyBands DifficultySplit(std::span<const Scene> scenes) {
  DifficultyBands bands;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    switch (DifficultyOf(scenes[i].StackedPairCount())) {
      case Difficulty::kSimple:
        bands.simple.push_back(i);
        break;
      case Difficulty::kMiddle:
        bands.middle.push_back(i);
        break;
      case Difficulty::kHard:
        bands.hard.push_back(i);
        break;
    }
  }
  return bands;
}

std::string ReportToText(const EvalReport& report) {
  std::string out = "split    class       recall  precision      tp      fp      fn\n";
  for (const auto& [name, split] : report.splits) {
    out += "[" + name + "]\n";
    AppendClassTable(out, split.metrics, "  ");
    for (const auto& [band, metrics] : split.difficulty) {
      out += "  difficulty " + std::string(ToString(band)) + "\n";
      AppendClassTable(out, metrics, "    ");
    }
    out += "  scene accuracy\n";
    for (const auto& [count, acc] : split.scene_accuracy.by_object_count) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "    objects=%-3zu %4zu/%-4zu %6.2f%%\n", count,
                    acc.correct, acc.total, 100.0 * acc.ratio());
      out += buf;
    }
    const AccuracyCount& all = split.scene_accuracy.overall;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "    overall     %4zu/%-4zu %6.2f%%\n", all.correct,
                  all.total, 100.0 * all.ratio());
    out += buf;
  }
  return out;
}

std::string ReportToJson(const EvalReport& report) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  nlohmann::ordered_json splits = nlohmann::ordered_json::object();
  for (const auto& [name, split] : report.splits) {
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    s["classes"] = ClassesJson(split.metrics);
    nlohmann::ordered_json sa = nlohmann::ordered_json::object();
    for (const auto& [count, acc] : split.scene_accuracy.by_object_count) {
      sa[std::to_string(count)] = {
          {"correct", acc.correct}, {"total", acc.total}, {"ratio", acc.ratio()}};
    }
    const AccuracyCount& all = split.scene_accuracy.overall;
    sa["overall"] = {{"correct", all.correct}, {"total", all.total}, {"ratio", all.ratio()}};
    s["scene_accuracy"] = std::move(sa);
    nlohmann::ordered_json diff = nlohmann::ordered_json::object();
    for (const auto& [band, metrics] : split.difficulty) {
      diff[std::string(ToString(band))] = {{"classes", ClassesJson(metrics)}};
    }
    s["difficulty"] = std::move(diff);
    splits[name] = std::move(s);
  }
  doc["splits"] = std::move(splits);
  return doc.dump(2) + "\n";
}

}  // namespace stackrel
