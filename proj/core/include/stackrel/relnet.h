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

#ifndef STACKREL_RELNET_H_
#define STACKREL_RELNET_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stackrel/alignment.h"
#include "stackrel/kmvn.h"
#include "stackrel/pointcloud.h"
#include "stackrel/vmf.h"
#include "stackrel/vmfml.h"

namespace stackrel {

// Optional pair features appended after [z_op1, z_op2].
enum class FeatureKind {
  // Centroid height of a minus centroid height of b.
  kCentroidZGap,
  // Area of the intersection of the two xy bounding rectangles divided by
  // the smaller rectangle's area.
  kFootprintOverlap,
};

std::string_view ToString(FeatureKind kind);
std::optional<FeatureKind> ParseFeatureKind(std::string_view text);

struct FeatureSpec {
  std::vector<FeatureKind> extras;

  std::size_t size() const { return 2 + extras.size(); }
  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

Eigen::VectorXd AssembleFeatures(const ObjectCloud& a, const ObjectCloud& b,
                                 const FeatureSpec& spec, const KmvnOptions& options = {});

// Same as above when the KMVN result for (a, b) is already known.
Eigen::VectorXd AssembleFeatures(const KmvnResult& kmvn, const ObjectCloud& a,
                                 const ObjectCloud& b, const FeatureSpec& spec);

double FootprintOverlap(const ObjectCloud& a, const ObjectCloud& b);

// Loss weights lambda_1..lambda_5 for detection (unused here), VMFML, cosine
// alignment, gradient reversal and relation classification.
struct LossWeights {
  double detection = 1.0;
  double vmfml = 10.0;
  double cosine_alignment = 1.0;
  double gradient_reversal = 1.0;
  double relation = 1.0;
};

void ValidateLossWeights(const LossWeights& weights);

// Multinomial logistic head: logits = W * (x ./ feature_scale) + bias, with
// rows ordered Parent, Child, NoRel.
struct RelClassifier {
  FeatureSpec spec;
  std::size_t k = kDefaultKmvnK;
  Eigen::MatrixXd weights;        // 3 x F
  Eigen::Vector3d bias = Eigen::Vector3d::Zero();
  Eigen::VectorXd feature_scale;  // F, all positive

  static RelClassifier Zero(const FeatureSpec& spec, std::size_t k = kDefaultKmvnK);

  Eigen::Vector3d Logits(const Eigen::VectorXd& features) const;
};

void ValidateClassifier(const RelClassifier& model);

struct PairPrediction {
  RelationClass label = RelationClass::kNoRel;
  Eigen::Vector3d probabilities = Eigen::Vector3d::Zero();

  double confidence() const { return probabilities[static_cast<int>(label)]; }
};

PairPrediction PredictPair(const RelClassifier& model, const Eigen::VectorXd& features);

struct LabeledFeatures {
  Eigen::VectorXd features;
  RelationClass label = RelationClass::kNoRel;
};

struct DrelLossGrad {
  double loss = 0.0;  // mean cross entropy
  Eigen::MatrixXd grad_weights;
  Eigen::Vector3d grad_bias = Eigen::Vector3d::Zero();
};

DrelLossGrad RelationLossAndGrad(const RelClassifier& model,
                                 std::span<const LabeledFeatures> data);

// Embedding-level terms optimized alongside the classifier. `source`
// embeddings must be labeled.
struct AlignmentInputs {
  std::vector<Embedding> source;
  std::vector<Embedding> target;
  VmfmlHead head;
  DomainDiscriminator discriminator;
  double grl_lambda = 1.0;
  EmOptions em;
};

struct TrainOptions {
  FeatureSpec spec;
  std::size_t k = kDefaultKmvnK;
  int epochs = 60;
  double learning_rate = 0.5;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  LossWeights weights;
  // Divide each feature by its root mean square over the training set.
  bool scale_features = true;
};

void ValidateTrainOptions(const TrainOptions& options);

struct TrainResult {
  RelClassifier model;
  // Entry 0 is the composite loss before training, then one entry per epoch.
  std::vector<double> loss_trace;
  std::vector<std::string> warnings;
  std::optional<AlignmentInputs> alignment;  // final alignment state
};

TrainResult Train(std::span<const LabeledFeatures> data, const TrainOptions& options,
                  std::optional<AlignmentInputs> alignment = std::nullopt);

// Labeled feature vectors for every ordered pair of a labeled scene.
// Degenerate pairs are skipped.
std::vector<LabeledFeatures> SceneTrainingPairs(const Scene& scene, const FeatureSpec& spec,
                                                std::size_t k, std::size_t jobs = 1);

struct GraphEdge {
  ObjectId parent = 0;
  ObjectId child = 0;
  double confidence = 0.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct ManipulationGraph {
  std::string scene_id;
  std::optional<std::string> view_id;
  std::vector<ObjectId> nodes;
  std::vector<GraphEdge> edges;  // sorted by (parent, child)
  // Ordered pairs whose features were degenerate; they are treated as NoRel.
  std::vector<OrderedPair> degenerate_pairs;

  friend bool operator==(const ManipulationGraph&, const ManipulationGraph&) = default;
};

// Directional predictions of one unordered pair {a, b}, a < b.
struct PairVotes {
  ObjectId a = 0;
  ObjectId b = 0;
  PairPrediction forward;   // features(a, b)
  PairPrediction backward;  // features(b, a)
  bool degenerate = false;
};

// Reconciles both directions of every pair, drops NoRel, and deletes the
// minimum-confidence edge of any directed cycle until the graph is acyclic.
ManipulationGraph BuildManipulationGraph(std::string scene_id, std::vector<ObjectId> nodes,
                                         std::span<const PairVotes> votes);

void RemoveCycles(std::vector<GraphEdge>& edges);
bool IsAcyclic(std::span<const GraphEdge> edges);

ManipulationGraph PredictScene(const RelClassifier& model, const Scene& scene,
                               std::size_t jobs = 1);

struct AuditFlag {
  ObjectId a = 0;
  ObjectId b = 0;
  RelationClass label = RelationClass::kNoRel;
  double z_op1 = 0.0;
};

inline constexpr double kDefaultAuditMargin = 0.0;

// Flags Child pairs with z_op1 <= margin and Parent pairs with
// z_op1 >= -margin.
std::vector<AuditFlag> AuditLabels(const Scene& scene, std::size_t k = kDefaultKmvnK,
                                   double margin = kDefaultAuditMargin);

std::string ModelToJson(const RelClassifier& model, const std::string& metadata_json = "{}");
RelClassifier ModelFromJson(const std::string& text);
void SaveModel(const RelClassifier& model, const std::string& path,
               const std::string& metadata_json = "{}");
RelClassifier LoadModel(const std::string& path);

std::string GraphToJson(const ManipulationGraph& graph);
ManipulationGraph GraphFromJson(const std::string& text);

}  // namespace stackrel

#endif  // STACKREL_RELNET_H_
