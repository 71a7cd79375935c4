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

#include "stackrel/domain_alignment.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stackrel/alignment.h"
#include "stackrel/errors.h"

namespace stackrel {

Eigen::MatrixXd ClassMeanDirections(std::span<const Embedding> data, int num_classes) {
  if (data.empty()) throw ValidationError("empty-data", "no embeddings");
  const auto d = data.front().vector.size();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(num_classes, d);
  for (const Embedding& e : data) {
    if (!e.label || *e.label < 0 || *e.label >= num_classes) {
      throw ValidationError("class-label", "every embedding needs a label in [0, K)");
    }
    sums.row(*e.label) += e.vector.transpose();
  }
  for (int j = 0; j < num_classes; ++j) {
    const double n = sums.row(j).norm();
    if (n < 1e-12) {
      throw DegenerateError("class " + std::to_string(j) + " has no resultant direction");
    }
    sums.row(j) /= n;
  }
  return sums;
}

double MeanAngularGap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() == 0) {
    throw ValidationError("dimension-mismatch", "direction matrices differ in shape");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const double c = a.row(j).dot(b.row(j)) / (a.row(j).norm() * b.row(j).norm());
    total += std::acos(std::clamp(c, -1.0, 1.0));
  }
  return total / static_cast<double>(a.rows()) * 180.0 / std::numbers::pi;
}

AlignResult AlignDomains(const VmfmlHead& head, std::span<const Embedding> source,
                         std::span<const Embedding> target, const AlignOptions& options) {
  if (options.iterations < 0 || !(options.learning_rate >= 0.0) ||
      !(options.vmfml_weight >= 0.0) || !(options.cosine_weight >= 0.0)) {
    throw ValidationError("align-options", "iterations, rate and weights must be >= 0");
  }
  if (source.empty() || target.empty()) {
    throw ValidationError("empty-data", "alignment needs source and target embeddings");
  }
  AlignResult out;
  out.head = head;
  const Eigen::MatrixXd mu = head.MeanDirections();
  VmfMixture init;
  for (int j = 0; j < head.num_classes(); ++j) {
    init.components.push_back({mu.row(j).transpose(), head.concentration});
    init.weights.push_back(1.0 / head.num_classes());
  }
  out.target = FitVmfMixture(target, init, options.em).mixture;
  Eigen::MatrixXd target_means(head.num_classes(), head.dim());
  for (int j = 0; j < head.num_classes(); ++j) {
    target_means.row(j) = out.target.components[j].mean_direction.transpose();
  }

  const double n = static_cast<double>(source.size());
  out.initial_gap_deg = MeanAngularGap(mu, target_means);
  for (int it = 0; it <= options.iterations; ++it) {
    const CosineAlignment st = CosineAlignmentLoss(out.head.raw_weights, target_means);
    out.cosine_trace.push_back(st.loss);
    if (it == options.iterations) break;
    Eigen::MatrixXd grad = options.cosine_weight * st.grad_source;
    if (options.vmfml_weight > 0.0) {
      grad += options.vmfml_weight / n * VmfmlLossAndGrad(out.head, source).grad;
    }
    out.head.raw_weights -= options.learning_rate * grad;
  }
  out.final_gap_deg = MeanAngularGap(out.head.MeanDirections(), target_means);
  return out;
}

}  // namespace stackrel
