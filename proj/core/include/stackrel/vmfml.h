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

#ifndef STACKREL_VMFML_H_
#define STACKREL_VMFML_H_

#include <Eigen/Dense>
#include <span>

#include "stackrel/vmf.h"

namespace stackrel {

inline constexpr double kDefaultVmfmlConcentration = 20.0;

// Softmax classification head constrained to the sphere: the logit of class j
// for a unit embedding z is kappa * mu_j^T z with mu_j = w_j / |w_j|. All
// classes share one concentration.
struct VmfmlHead {
  Eigen::MatrixXd raw_weights;  // K x d, row j is w_j
  double concentration = kDefaultVmfmlConcentration;

  int num_classes() const { return static_cast<int>(raw_weights.rows()); }
  int dim() const { return static_cast<int>(raw_weights.cols()); }

  // K x d matrix of unit rows mu_j. Throws ValidationError when any
  // |w_j| < 1e-12.
  Eigen::MatrixXd MeanDirections() const;
};

// Class posterior for one embedding; entries positive and summing to 1.
Eigen::VectorXd VmfmlPosterior(const VmfmlHead& head, const Eigen::VectorXd& z);

struct VmfmlLossGrad {
  double loss = 0.0;
  Eigen::MatrixXd grad;  // same shape as raw_weights
};

// Summed cross-entropy -sum_i log p(y_i | z_i) and its gradient with respect
// to the raw weights, taken through the w -> w / |w| normalization:
//   dL/dw_j = kappa / |w_j| * sum_i (p_ij - y_ij) (I - mu_j mu_j^T) z_i.
// Throws ValidationError for unlabeled samples or labels outside [0, K).
VmfmlLossGrad VmfmlLossAndGrad(const VmfmlHead& head, std::span<const Embedding> batch);

}  // namespace stackrel

#endif  // STACKREL_VMFML_H_
