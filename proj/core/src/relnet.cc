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

#include "stackrel/relnet.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "stackrel/errors.h"

namespace stackrel {

namespace {

struct Rect {
  double x0, y0, x1, y1;
  double Area() const { return (x1 - x0) * (y1 - y0); }
};

Rect FootprintRect(const ObjectCloud& cloud) {
  Rect r{cloud.points.front().x, cloud.points.front().y, cloud.points.front().x,
         cloud.points.front().y};
  for (const Point3& p : cloud.points) {
    r.x0 = std::min(r.x0, p.x);
    r.y0 = std::min(r.y0, p.y);
    r.x1 = std::max(r.x1, p.x);
    r.y1 = std::max(r.y1, p.y);
  }
  return r;
}

Eigen::Vector3d Softmax(const Eigen::Vector3d& logits) {
  const Eigen::Vector3d e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

double CrossEntropy(const Eigen::Vector3d& logits, int label) {
  const double hi = logits.maxCoeff();
  return hi + std::log((logits.array() - hi).exp().sum()) - logits[label];
}

void CheckFeatures(const RelClassifier& model, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(model.spec.size())) {
    throw ValidationError("dimension-mismatch",
                          "feature vector has " + std::to_string(x.size()) +
                              " entries, model expects " + std::to_string(model.spec.size()));
  }
}

Eigen::MatrixXd MeansMatrix(const VmfMixture& mix) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(mix.size()), mix.dim());
  for (std::size_t j = 0; j < mix.size(); ++j) {
    m.row(static_cast<Eigen::Index>(j)) = mix.components[j].mean_direction.transpose();
  }
  return m;
}

struct AlignmentState {
  AlignmentInputs inputs;
  Eigen::MatrixXd target_means;
  Eigen::MatrixXd features;  // all embeddings, source rows first
  std::vector<int> domains;
};

AlignmentState PrepareAlignment(AlignmentInputs inputs) {
  const VmfmlHead& head = inputs.head;
  if (inputs.source.empty() || inputs.target.empty()) {
    throw ValidationError("alignment-inputs", "source and target embeddings are required");
  }
  VmfMixture init;
  const Eigen::MatrixXd mu = head.MeanDirections();
  for (int j = 0; j < head.num_classes(); ++j) {
    init.components.push_back({mu.row(j).transpose(), head.concentration});
    init.weights.push_back(1.0 / head.num_classes());
  }
  AlignmentState st;
  st.target_means = MeansMatrix(FitVmfMixture(inputs.target, init, inputs.em).mixture);
  const std::size_t n = inputs.source.size() + inputs.target.size();
  st.features.resize(static_cast<Eigen::Index>(n), head.dim());
  Eigen::Index row = 0;
  for (const auto* set : {&inputs.source, &inputs.target}) {
    for (const Embedding& e : *set) {
      if (e.vector.size() != head.dim()) {
        throw ValidationError("dimension-mismatch", "embedding and head dimensions differ");
      }
      st.features.row(row++) = e.vector.transpose();
      st.domains.push_back(e.domain.is_source() ? 0 : 1);
    }
  }
  if (inputs.discriminator.w1.cols() != head.dim() || inputs.discriminator.w2.rows() != 2) {
    throw ValidationError("discriminator-shape",
                          "discriminator must map embeddings to two domain logits");
  }
  st.inputs = std::move(inputs);
  return st;
}

// Weighted alignment terms at the current state; steps them when lr > 0.
double AlignmentTerms(AlignmentState& st, const LossWeights& w, double lr, bool step) {
  AlignmentInputs& in = st.inputs;
  const double n = static_cast<double>(in.source.size());
  const VmfmlLossGrad vm = VmfmlLossAndGrad(in.head, in.source);
  const CosineAlignment cos = CosineAlignmentLoss(in.head.raw_weights, st.target_means);
  const DomainDiscriminator::Gradients dg =
      in.discriminator.Backward(st.features, st.domains, in.grl_lambda);
  const double m = static_cast<double>(st.domains.size());
  const double total = w.vmfml * vm.loss / n + w.cosine_alignment * cos.loss +
                       w.gradient_reversal * dg.loss / m;
  if (step && lr > 0.0) {
    in.head.raw_weights -= lr * (w.vmfml / n * vm.grad + w.cosine_alignment * cos.grad_source);
    in.discriminator.Step(dg, lr * w.gradient_reversal / m);
  }
  return total;
}

}  // namespace

std::string_view ToString(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kCentroidZGap:
      return "centroid_z_gap";
    case FeatureKind::kFootprintOverlap:
      return "footprint_overlap";
  }
  return "centroid_z_gap";
}

std::optional<FeatureKind> ParseFeatureKind(std::string_view text) {
  if (text == "centroid_z_gap") return FeatureKind::kCentroidZGap;
  if (text == "footprint_overlap") return FeatureKind::kFootprintOverlap;
  return std::nullopt;
}

double FootprintOverlap(const ObjectCloud& a, const ObjectCloud& b) {
  if (a.points.empty() || b.points.empty()) {
    throw ValidationError("empty-cloud", "footprint of an empty cloud");
  }
  const Rect ra = FootprintRect(a);
  const Rect rb = FootprintRect(b);
  const double w = std::min(ra.x1, rb.x1) - std::max(ra.x0, rb.x0);
  const double h = std::min(ra.y1, rb.y1) - std::max(ra.y0, rb.y0);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  const double smaller = std::min(ra.Area(), rb.Area());
  return smaller > 0.0 ? std::min(1.0, w * h / smaller) : 1.0;
}

Eigen::VectorXd AssembleFeatures(const KmvnResult& kmvn, const ObjectCloud& a,
                                 const ObjectCloud& b, const FeatureSpec& spec) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(spec.size()));
  x[0] = kmvn.z_op1;
  x[1] = kmvn.z_op2;
  Eigen::Index i = 2;
  for (FeatureKind kind : spec.extras) {
    switch (kind) {
      case FeatureKind::kCentroidZGap:
        x[i] = CentroidZGap(a, b);
        break;
      case FeatureKind::kFootprintOverlap:
        x[i] = FootprintOverlap(a, b);
        break;
    }
    ++i;
  }
  return x;
}

Eigen::VectorXd AssembleFeatures(const ObjectCloud& a, const ObjectCloud& b,
                                 const FeatureSpec& spec, const KmvnOptions& options) {
  return AssembleFeatures(SelectKmvn(a, b, options), a, b, spec);
}

void ValidateLossWeights(const LossWeights& w) {
  for (double v : {w.detection, w.vmfml, w.cosine_alignment, w.gradient_reversal, w.relation}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("loss-weights", "every lambda must be finite and >= 0");
    }
  }
}

RelClassifier RelClassifier::Zero(const FeatureSpec& spec, std::size_t k) {
  RelClassifier m;
  m.spec = spec;
  m.k = k;
  const auto f = static_cast<Eigen::Index>(spec.size());
  m.weights = Eigen::MatrixXd::Zero(kNumRelationClasses, f);
  m.feature_scale = Eigen::VectorXd::Ones(f);
  return m;
}

Eigen::Vector3d RelClassifier::Logits(const Eigen::VectorXd& features) const {
  return weights * features.cwiseQuotient(feature_scale) + bias;
}

void ValidateClassifier(const RelClassifier& model) {
  const auto f = static_cast<Eigen::Index>(model.spec.size());
  if (model.weights.rows() != kNumRelationClasses || model.weights.cols() != f ||
      model.feature_scale.size() != f) {
    throw ValidationError("model-shape", "weights must be 3 x F with F matching feature_spec");
  }
  if (!model.weights.allFinite() || !model.bias.allFinite() ||
      !model.feature_scale.allFinite() || (model.feature_scale.array() <= 0.0).any()) {
    throw ValidationError("model-finite", "model parameters must be finite");
  }
  if (model.k == 0) throw ValidationError("k-positive", "k must be at least 1");
}

PairPrediction PredictPair(const RelClassifier& model, const Eigen::VectorXd& features) {
  CheckFeatures(model, features);
  const Eigen::Vector3d logits = model.Logits(features);
  PairPrediction p;
  p.probabilities = Softmax(logits);
  int best = 0;
  for (int c = 1; c < kNumRelationClasses; ++c) {
    if (logits[c] > logits[best]) best = c;
  }
  p.label = static_cast<RelationClass>(best);
  return p;
}

DrelLossGrad RelationLossAndGrad(const RelClassifier& model,
                                 std::span<const LabeledFeatures> data) {
  DrelLossGrad out;
  out.grad_weights = Eigen::MatrixXd::Zero(model.weights.rows(), model.weights.cols());
  if (data.empty()) return out;
  for (const LabeledFeatures& s : data) {
    CheckFeatures(model, s.features);
    const Eigen::VectorXd x = s.features.cwiseQuotient(model.feature_scale);
    const Eigen::Vector3d logits = model.weights * x + model.bias;
    const int y = static_cast<int>(s.label);
    out.loss += CrossEntropy(logits, y);
    Eigen::Vector3d g = Softmax(logits);
    g[y] -= 1.0;
    out.grad_weights.noalias() += g * x.transpose();
    out.grad_bias += g;
  }
  const double inv = 1.0 / static_cast<double>(data.size());
  out.loss *= inv;
  out.grad_weights *= inv;
  out.grad_bias *= inv;
  return out;
}

void ValidateTrainOptions(const TrainOptions& o) {
  ValidateLossWeights(o.weights);
  if (o.epochs < 0) throw ValidationError("epochs", "must be >= 0");
  if (!std::isfinite(o.learning_rate) || o.learning_rate < 0.0) {
    throw ValidationError("learning-rate", "must be finite and >= 0");
  }
  if (o.batch_size == 0) throw ValidationError("batch-size", "must be >= 1");
  if (o.k == 0) throw ValidationError("k-positive", "k must be at least 1");
}

TrainResult Train(std::span<const LabeledFeatures> data, const TrainOptions& options,
                  std::optional<AlignmentInputs> alignment) {
  ValidateTrainOptions(options);
  if (data.empty()) throw ValidationError("empty-dataset", "training set is empty");

  TrainResult result;
  RelClassifier& model = result.model;
  model = RelClassifier::Zero(options.spec, options.k);
  const auto f = static_cast<Eigen::Index>(options.spec.size());

  std::array<std::size_t, kNumRelationClasses> counts{};
  for (const LabeledFeatures& s : data) {
    CheckFeatures(model, s.features);
    if (!s.features.allFinite()) {
      throw ValidationError("non-finite-feature", "training features must be finite");
    }
    ++counts[static_cast<int>(s.label)];
  }
  const std::size_t present = std::count_if(counts.begin(), counts.end(),
                                             [](std::size_t c) { return c > 0; });
  if (present == 1) {
    result.warnings.push_back("training set contains a single class");
  } else if (counts[2] == 0 || counts[0] + counts[1] == 0) {
    result.warnings.push_back("training set lacks either stacked or unstacked pairs");
  }
  if (options.learning_rate == 0.0) {
    result.warnings.push_back("learning rate is 0; parameters will not change");
  }

  if (options.scale_features) {
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(f);
    for (const LabeledFeatures& s : data) sq += s.features.cwiseAbs2();
    for (Eigen::Index i = 0; i < f; ++i) {
      const double rms = std::sqrt(sq[i] / static_cast<double>(data.size()));
      model.feature_scale[i] = rms > 1e-12 ? rms : 1.0;
    }
  }

  std::optional<AlignmentState> align;
  if (alignment) align = PrepareAlignment(std::move(*alignment));

  const LossWeights& w = options.weights;
  auto composite = [&]() {
    double loss = w.relation * RelationLossAndGrad(model, data).loss;
    if (align) loss += AlignmentTerms(*align, w, 0.0, false);
    return loss;
  };
  result.loss_trace.push_back(composite());

  Rng rng = MakeRng(options.seed, "train");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LabeledFeatures> batch;
  const double lr = options.learning_rate;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      const DrelLossGrad g = RelationLossAndGrad(model, batch);
      if (lr > 0.0) {
        model.weights -= lr * w.relation * g.grad_weights;
        model.bias -= lr * w.relation * g.grad_bias;
      }
    }
    if (align) AlignmentTerms(*align, w, lr, true);
    result.loss_trace.push_back(composite());
  }
  if (align) result.alignment = std::move(align->inputs);
  return result;
}

std::vector<LabeledFeatures> SceneTrainingPairs(const Scene& scene, const FeatureSpec& spec,
                                                std::size_t k, std::size_t jobs) {
  KmvnOptions opts;
  opts.k = k;
  std::vector<LabeledFeatures> out;
  for (const OrderedPairFeatures& p : AllPairFeatures(scene, opts, jobs)) {
    if (p.degenerate) continue;
    out.push_back({AssembleFeatures(p.kmvn, *scene.Find(p.a), *scene.Find(p.b), spec),
                   scene.Label(p.a, p.b)});
  }
  return out;
}

std::vector<AuditFlag> AuditLabels(const Scene& scene, std::size_t k, double margin) {
  KmvnOptions opts;
  opts.k = k;
  std::vector<AuditFlag> flags;
  for (const auto& [pair, label] : scene.labels) {
    if (label == RelationClass::kNoRel) continue;
    const ObjectCloud* a = scene.Find(pair.first);
    const ObjectCloud* b = scene.Find(pair.second);
    if (!a || !b || a->points.empty() || b->points.empty()) continue;
    double z = 0.0;
    try {
      z = SelectKmvn(*a, *b, opts).z_op1;
    } catch (const DegenerateError&) {
      continue;
    }
    const bool flagged = label == RelationClass::kChild ? z <= margin : z >= -margin;
    if (flagged) flags.push_back({pair.first, pair.second, label, z});
  }
  return flags;
}

}  // namespace stackrel
