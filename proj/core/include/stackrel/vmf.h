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

#ifndef STACKREL_VMF_H_
#define STACKREL_VMF_H_

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stackrel/rng.h"

namespace stackrel {

// Von-Mises-Fisher density on the unit sphere S^{d-1}:
//   p(z | mu, kappa) = C_d(kappa) exp(kappa mu^T z),
//   C_d(kappa) = kappa^{d/2-1} / ((2 pi)^{d/2} I_{d/2-1}(kappa)).

// Concentrations below this are treated as the uniform density.
inline constexpr double kUniformKappa = 1e-8;
// Upper clamp for concentrations estimated by the M-step.
inline constexpr double kKappaMax = 1e5;

struct VmfParams {
  Eigen::VectorXd mean_direction;  // unit norm
  double concentration = 0.0;      // kappa >= 0

  int dim() const { return static_cast<int>(mean_direction.size()); }
};

// Mixture of K components sharing one dimension; weights sum to 1.
struct VmfMixture {
  std::vector<VmfParams> components;
  std::vector<double> weights;

  std::size_t size() const { return components.size(); }
  int dim() const { return components.empty() ? 0 : components.front().dim(); }
};

struct DomainTag {
  enum class Kind { kSource, kTarget };

  Kind kind = Kind::kSource;
  int index = 0;  // source domain index; unused for the target

  static DomainTag Source(int i) { return {Kind::kSource, i}; }
  static DomainTag Target() { return {Kind::kTarget, 0}; }
  bool is_source() const { return kind == Kind::kSource; }

  friend bool operator==(const DomainTag&, const DomainTag&) = default;
};

struct Embedding {
  Eigen::VectorXd vector;  // unit norm
  DomainTag domain;
  std::optional<int> label;  // class index; only read for source samples
};

// Normalizes `raw` (which must be non-zero) into an Embedding.
Embedding MakeEmbedding(const Eigen::VectorXd& raw, DomainTag domain = {},
                        std::optional<int> label = std::nullopt);

// Throw ValidationError on broken invariants.
void ValidateVmfParams(const VmfParams& params);
void ValidateMixture(const VmfMixture& mixture);

// log C_d(kappa); the uniform value log Gamma(d/2) - log(2 pi^{d/2}) below
// kUniformKappa.
double LogVmfNormalizer(int dim, double kappa);

double VmfLogPdf(const Eigen::VectorXd& z, const VmfParams& params);

// Wood's rejection sampler for the cosine to the mean plus a uniform tangent
// direction. Deterministic for a given generator state.
std::vector<Embedding> SampleVmf(const VmfParams& params, std::size_t n, Rng& rng);

// Numerically safe log(sum exp(values)). -inf for an empty or all -inf input.
double LogSumExp(std::span<const double> values);

// N x K responsibilities p_ij proportional to pi_j C_d(kappa_j) exp(kappa_j
// mu_j^T z_i), evaluated in log space. Rows sum to 1.
Eigen::MatrixXd EStep(const VmfMixture& mixture, std::span<const Embedding> data,
                      double* log_likelihood = nullptr);

// sum_i log sum_j pi_j p(z_i | mu_j, kappa_j), compensated summation.
double MixtureLogLikelihood(const VmfMixture& mixture,
                            std::span<const Embedding> data);

enum class ConcentrationUpdate {
  // kappa = (r d - r^3) / (1 - r^2).
  kClosedForm,
  // The closed form refined by Newton steps on A_d(kappa) = r, the exact
  // maximizer of the weighted likelihood.
  kNewton,
};

struct MStepOptions {
  double kappa_max = kKappaMax;
  ConcentrationUpdate concentration_update = ConcentrationUpdate::kNewton;
};

// Closed-form concentration estimate from the mean resultant length r,
// clamped to [0, kappa_max].
double ConcentrationFromResultant(double mean_resultant_length, int dim,
                                  double kappa_max = kKappaMax);

// Solves A_d(kappa) = r starting from the closed form.
double ConcentrationNewton(double mean_resultant_length, int dim,
                           double kappa_max = kKappaMax);

// pi_j = mean_i p_ij; mu_j = normalized sum_i p_ij z_i; r_j = |sum_i p_ij z_i|
// / sum_i p_ij. Throws ComponentCollapseError when sum_i p_ij < 1e-12.
VmfMixture MStep(const Eigen::MatrixXd& responsibilities,
                 std::span<const Embedding> data, const MStepOptions& options = {});

struct EmOptions {
  int max_iters = 200;
  double tol = 1e-9;  // stop once the log-likelihood gains less than this
  MStepOptions m_step;
};

struct EmFitResult {
  VmfMixture mixture;
  // log_likelihood[0] is the initial mixture's; one entry per completed
  // iteration follows.
  std::vector<double> log_likelihood;
  int iterations = 0;
  bool converged = false;
};

EmFitResult FitVmfMixture(std::span<const Embedding> data, const VmfMixture& init,
                          const EmOptions& options = {});

}  // namespace stackrel

#endif  // STACKREL_VMF_H_
