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

#include "stackrel/vmfml.h"

#include <cmath>
#include <string>

#include "stackrel/errors.h"

namespace stackrel {

namespace {

void CheckHead(const VmfmlHead& head) {
  if (head.num_classes() < 1 || head.dim() < 1) {
    throw ValidationError("vmfml-shape", "head needs at least one class and dimension");
  }
  if (!head.raw_weights.allFinite()) {
    throw ValidationError("vmfml-finite", "raw weights must be finite");
  }
  if (!(head.concentration > 0.0) || !std::isfinite(head.concentration)) {
    throw ValidationError("concentration", "head concentration must be positive");
  }
}

}  // namespace

Eigen::MatrixXd VmfmlHead::MeanDirections() const {
  Eigen::MatrixXd mu = raw_weights;
  for (Eigen::Index j = 0; j < mu.rows(); ++j) {
    const double n = mu.row(j).norm();
    if (!(n >= 1e-12)) {
      throw ValidationError("vmfml-weight-norm",
                            "class " + std::to_string(j) + " weight is (near) zero");
    }
    mu.row(j) /= n;
  }
  return mu;
}

Eigen::VectorXd VmfmlPosterior(const VmfmlHead& head, const Eigen::VectorXd& z) {
  CheckHead(head);
  if (z.size() != head.dim()) {
    throw ValidationError("dimension-mismatch", "embedding and head dimensions differ");
  }
  const Eigen::VectorXd logits = head.concentration * (head.MeanDirections() * z);
  const Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

VmfmlLossGrad VmfmlLossAndGrad(const VmfmlHead& head, std::span<const Embedding> batch) {
  CheckHead(head);
  const Eigen::MatrixXd mu = head.MeanDirections();
  const int k = head.num_classes();
  const double kappa = head.concentration;

  VmfmlLossGrad out;
  out.grad = Eigen::MatrixXd::Zero(k, head.dim());
  // Accumulates sum_i (p_ij - y_ij) z_i per class before projecting.
  Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(k, head.dim());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Embedding& e = batch[i];
    if (!e.label) {
      throw ValidationError("vmfml-label", "sample " + std::to_string(i) + " has no label");
    }
    const int y = *e.label;
    if (y < 0 || y >= k) {
      throw ValidationError("vmfml-label", "label " + std::to_string(y) + " outside [0, " +
                                               std::to_string(k) + ")");
    }
    if (e.vector.size() != head.dim()) {
      throw ValidationError("dimension-mismatch", "embedding and head dimensions differ");
    }
    const Eigen::VectorXd logits = kappa * (mu * e.vector);
    Eigen::Index top = 0;
    const double hi = logits.maxCoeff(&top);
    // -log p_y = log(1 + sum_{j != y} exp(l_j - l_y)) when y holds the max,
    // which keeps tiny losses exact.
    double loss_i = 0.0;
    if (top == y || logits[y] == hi) {
      double rest = 0.0;
      for (int j = 0; j < k; ++j) {
        if (j != y) rest += std::exp(logits[j] - logits[y]);
      }
      loss_i = std::log1p(rest);
    } else {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += std::exp(logits[j] - hi);
      loss_i = hi + std::log(s) - logits[y];
    }
    out.loss += loss_i;

    Eigen::VectorXd p = (logits.array() - hi).exp();
    p /= p.sum();
    p[y] -= 1.0;
    weighted.noalias() += p * e.vector.transpose();
  }
  for (int j = 0; j < k; ++j) {
    const double norm = head.raw_weights.row(j).norm();
    const Eigen::RowVectorXd s = weighted.row(j);
    const Eigen::RowVectorXd m = mu.row(j);
    out.grad.row(j) = kappa / norm * (s - s.dot(m) * m);
  }
  return out;
}

}  // namespace stackrel
