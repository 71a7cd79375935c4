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

#include "stackrel/alignment.h"

#include <cmath>
#include <string>

#include "stackrel/errors.h"

namespace stackrel {

CosineAlignment CosineAlignmentLoss(const Eigen::MatrixXd& source_means,
                                    const Eigen::MatrixXd& target_means) {
  if (source_means.rows() != target_means.rows() ||
      source_means.cols() != target_means.cols()) {
    throw ValidationError("dimension-mismatch", "source and target means differ in shape");
  }
  CosineAlignment out;
  out.grad_source = Eigen::MatrixXd::Zero(source_means.rows(), source_means.cols());
  out.grad_target = Eigen::MatrixXd::Zero(target_means.rows(), target_means.cols());
  for (Eigen::Index j = 0; j < source_means.rows(); ++j) {
    const Eigen::RowVectorXd s = source_means.row(j);
    const Eigen::RowVectorXd t = target_means.row(j);
    const double ns = s.norm();
    const double nt = t.norm();
    if (!(ns > 0.0) || !(nt > 0.0)) {
      throw ValidationError("non-zero-mean", "class " + std::to_string(j) + " has a zero mean");
    }
    const double c = s.dot(t) / (ns * nt);
    if (1.0 + c < 1e-9) {
      throw NumericalError("alignment singularity: class " + std::to_string(j) +
                           " source and target means are antipodal");
    }
    out.loss += 1.0 / (1.0 + c);
    const double outer = -1.0 / ((1.0 + c) * (1.0 + c));
    out.grad_source.row(j) = outer * (t / (ns * nt) - c * s / (ns * ns));
    out.grad_target.row(j) = outer * (s / (ns * nt) - c * t / (nt * nt));
  }
  return out;
}

Eigen::MatrixXd GradientReversalBackward(const Eigen::MatrixXd& upstream, double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("grl-lambda", "lambda must be >= 0");
  return -lambda * upstream;
}

DiscriminatorLoss DomainDiscriminatorLoss(std::span<const Eigen::MatrixXd> layer_logits,
                                          std::span<const int> labels) {
  DiscriminatorLoss out;
  for (std::size_t l = 0; l < layer_logits.size(); ++l) {
    const Eigen::MatrixXd& logits = layer_logits[l];
    if (logits.rows() != static_cast<Eigen::Index>(labels.size())) {
      throw ValidationError("dimension-mismatch",
                            "layer " + std::to_string(l) + " has " +
                                std::to_string(logits.rows()) + " rows for " +
                                std::to_string(labels.size()) + " labels");
    }
    Eigen::MatrixXd grad(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
      const int y = labels[static_cast<std::size_t>(i)];
      if (y < 0 || y >= logits.cols()) {
        throw ValidationError("domain-label", "domain label " + std::to_string(y) +
                                                  " outside [0, " +
                                                  std::to_string(logits.cols()) + ")");
      }
      const double hi = logits.row(i).maxCoeff();
      const Eigen::RowVectorXd e = (logits.row(i).array() - hi).exp();
      const double s = e.sum();
      out.loss += hi + std::log(s) - logits(i, y);
      grad.row(i) = e / s;
      grad(i, y) -= 1.0;
    }
    out.grad_logits.push_back(std::move(grad));
  }
  return out;
}

DomainDiscriminator DomainDiscriminator::Random(int input_dim, int hidden_dim,
                                                int num_domains, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  DomainDiscriminator d;
  d.w1.resize(hidden_dim, input_dim);
  d.b1 = Eigen::VectorXd::Zero(hidden_dim);
  d.w2.resize(num_domains, hidden_dim);
  d.b2 = Eigen::VectorXd::Zero(num_domains);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (Eigen::Index i = 0; i < d.w1.size(); ++i) d.w1.data()[i] = s1 * gauss(rng);
  for (Eigen::Index i = 0; i < d.w2.size(); ++i) d.w2.data()[i] = s2 * gauss(rng);
  return d;
}

Eigen::MatrixXd DomainDiscriminator::Logits(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd pre = features * w1.transpose();
  pre.rowwise() += b1.transpose();
  const Eigen::MatrixXd hidden = pre.array().tanh();
  Eigen::MatrixXd logits = hidden * w2.transpose();
  logits.rowwise() += b2.transpose();
  return logits;
}

double DomainDiscriminator::Loss(const Eigen::MatrixXd& features,
                                 std::span<const int> labels) const {
  const Eigen::MatrixXd logits = Logits(GradientReversalForward(features));
  return DomainDiscriminatorLoss(std::span<const Eigen::MatrixXd>(&logits, 1), labels).loss;
}

DomainDiscriminator::Gradients DomainDiscriminator::Backward(const Eigen::MatrixXd& features,
                                                             std::span<const int> labels,
                                                             double grl_lambda) const {
  const Eigen::MatrixXd& x = GradientReversalForward(features);
  Eigen::MatrixXd pre = x * w1.transpose();
  pre.rowwise() += b1.transpose();
  const Eigen::MatrixXd hidden = pre.array().tanh();
  Eigen::MatrixXd logits = hidden * w2.transpose();
  logits.rowwise() += b2.transpose();
  DiscriminatorLoss ce =
      DomainDiscriminatorLoss(std::span<const Eigen::MatrixXd>(&logits, 1), labels);
  const Eigen::MatrixXd& dlogits = ce.grad_logits.front();

  Gradients g;
  g.loss = ce.loss;
  g.w2 = dlogits.transpose() * hidden;
  g.b2 = dlogits.colwise().sum().transpose();
  const Eigen::MatrixXd dhidden = dlogits * w2;
  const Eigen::MatrixXd dpre = dhidden.array() * (1.0 - hidden.array().square());
  g.w1 = dpre.transpose() * x;
  g.b1 = dpre.colwise().sum().transpose();
  g.features = GradientReversalBackward(dpre * w1, grl_lambda);
  return g;
}

void DomainDiscriminator::Step(const Gradients& g, double learning_rate) {
  w1 -= learning_rate * g.w1;
  b1 -= learning_rate * g.b1;
  w2 -= learning_rate * g.w2;
  b2 -= learning_rate * g.b2;
}

}  // namespace stackrel
