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

#ifndef STACKREL_ALIGNMENT_H_
#define STACKREL_ALIGNMENT_H_

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "stackrel/rng.h"

namespace stackrel {

// Source/target mean alignment: L = sum_j 1 / (1 + cos(s_j, t_j)) over the
// rows of two K x d matrices. Minimal (K / 2) when every pair coincides.
struct CosineAlignment {
  double loss = 0.0;
  Eigen::MatrixXd grad_source;
  Eigen::MatrixXd grad_target;
};

// Throws ValidationError on shape mismatch or zero rows, NumericalError when
// any pair is (nearly) antipodal, i.e. 1 + cos < 1e-9.
CosineAlignment CosineAlignmentLoss(const Eigen::MatrixXd& source_means,
                                    const Eigen::MatrixXd& target_means);

// Gradient reversal layer. The forward pass is the identity; the backward
// pass returns -lambda times the upstream gradient.
inline const Eigen::MatrixXd& GradientReversalForward(const Eigen::MatrixXd& x) { return x; }
Eigen::MatrixXd GradientReversalBackward(const Eigen::MatrixXd& upstream, double lambda);

// Domain discriminator cross-entropy summed over layers and samples:
//   L = -sum_layers sum_i sum_c y_ic log softmax(logits)_ic.
// Each layer holds an N x (N_s + 1) logit matrix; labels index the domain
// (sources 0..N_s-1, target N_s).
struct DiscriminatorLoss {
  double loss = 0.0;
  std::vector<Eigen::MatrixXd> grad_logits;  // per layer, softmax - onehot
};

DiscriminatorLoss DomainDiscriminatorLoss(std::span<const Eigen::MatrixXd> layer_logits,
                                          std::span<const int> labels);

// Two-layer tanh discriminator used behind a gradient reversal layer.
struct DomainDiscriminator {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // domains x hidden
  Eigen::VectorXd b2;

  static DomainDiscriminator Random(int input_dim, int hidden_dim, int num_domains, Rng& rng);

  struct Gradients {
    double loss = 0.0;
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
    // Gradient reaching the features after the reversal layer.
    Eigen::MatrixXd features;
  };

  // N x domains logits for N x input features.
  Eigen::MatrixXd Logits(const Eigen::MatrixXd& features) const;
  double Loss(const Eigen::MatrixXd& features, std::span<const int> labels) const;
  Gradients Backward(const Eigen::MatrixXd& features, std::span<const int> labels,
                     double grl_lambda) const;
  void Step(const Gradients& g, double learning_rate);
};

}  // namespace stackrel

#endif  // STACKREL_ALIGNMENT_H_
