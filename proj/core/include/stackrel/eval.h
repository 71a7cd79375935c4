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

#ifndef STACKREL_EVAL_H_
#define STACKREL_EVAL_H_

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stackrel/pointcloud.h"
#include "stackrel/relnet.h"

namespace stackrel {

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  // 0/0 is defined as 1.
  double precision() const;
  double recall() const;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct ClassMetrics {
  std::array<ClassCounts, kNumRelationClasses> classes;

  const ClassCounts& operator[](RelationClass c) const {
    return classes[static_cast<int>(c)];
  }
  ClassCounts& operator[](RelationClass c) { return classes[static_cast<int>(c)]; }
  ClassMetrics& operator+=(const ClassMetrics& other);

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

using PairLabels = std::map<OrderedPair, RelationClass>;

// One-vs-rest counts over ordered pairs. Throws ValidationError("key-mismatch")
// when the two maps do not share the same key set.
ClassMetrics PairwiseMetrics(const PairLabels& predicted, const PairLabels& truth);

// Expands a graph into ordered-pair labels over the keys of `truth`: an edge
// p -> c yields Parent(p, c) and Child(c, p); other keys are NoRel.
PairLabels GraphToPairLabels(const ManipulationGraph& graph, const PairLabels& truth);

using EdgeSet = std::set<OrderedPair>;  // (parent, child)

EdgeSet ParentEdges(const ManipulationGraph& graph);
EdgeSet ParentEdges(const Scene& scene);

struct SceneOutcome {
  EdgeSet predicted;
  EdgeSet truth;
  std::size_t object_count = 0;
};

struct AccuracyCount {
  std::size_t correct = 0;
  std::size_t total = 0;

  double ratio() const;
  friend bool operator==(const AccuracyCount&, const AccuracyCount&) = default;
};

struct SceneAccuracyReport {
  std::map<std::size_t, AccuracyCount> by_object_count;
  AccuracyCount overall;

  friend bool operator==(const SceneAccuracyReport&, const SceneAccuracyReport&) = default;
};

// A scene is correct iff its predicted Parent edge set equals the truth set.
SceneAccuracyReport SceneAccuracy(std::span<const SceneOutcome> scenes);

enum class Difficulty { kSimple, kMiddle, kHard };
inline constexpr int kNumDifficulties = 3;

std::string_view ToString(Difficulty d);

// Bands by number of stacked pairs p: simple p <= 5, middle 6..10, hard >= 11.
Difficulty DifficultyOf(std::size_t stacked_pairs);

struct DifficultyBands {
  std::vector<std::size_t> simple;
  std::vector<std::size_t> middle;
  std::vector<std::size_t> hard;
};

// Partitions scene indices by difficulty band.
DifficultyBands DifficultySplit(std::span<const Scene> scenes);

struct SplitReport {
  ClassMetrics metrics;
  SceneAccuracyReport scene_accuracy;
  std::map<Difficulty, ClassMetrics> difficulty;
};

struct EvalReport {
  std::map<std::string, SplitReport> splits;  // e.g. "seen", "unseen"
};

std::string ReportToText(const EvalReport& report);
std::string ReportToJson(const EvalReport& report);

}  // namespace stackrel

#endif  // STACKREL_EVAL_H_
