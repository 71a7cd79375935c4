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

#ifndef STACKREL_DOMAIN_ALIGNMENT_H_
#define STACKREL_DOMAIN_ALIGNMENT_H_

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "stackrel/vmf.h"
#include "stackrel/vmfml.h"

namespace stackrel {

// Instance-level alignment of a VMFML head (trained on labeled source
// embeddings) to unlabeled target embeddings.
struct AlignOptions {
  int iterations = 200;
  double learning_rate = 0.05;
  double vmfml_weight = 10.0;
  double cosine_weight = 1.0;
  EmOptions em;
};

struct AlignResult {
  VmfmlHead head;
  VmfMixture target;  // target mixture, component j paired with class j
  std::vector<double> cosine_trace;  // L_st before and after every step
  double initial_gap_deg = 0.0;
  double final_gap_deg = 0.0;
};

// Per-class mean directions of labeled embeddings (K x d, unit rows).
Eigen::MatrixXd ClassMeanDirections(std::span<const Embedding> data, int num_classes);

// Mean angle in degrees between matching rows of two direction matrices.
double MeanAngularGap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Fits the target mixture by EM initialized from the head's mean
// directions, then descends vmfml_weight * L_vmfml / N + cosine_weight * L_st
// over the head weights.
AlignResult AlignDomains(const VmfmlHead& head, std::span<const Embedding> source,
                         std::span<const Embedding> target, const AlignOptions& options = {});

}  // namespace stackrel

#endif  // STACKREL_DOMAIN_ALIGNMENT_H_
