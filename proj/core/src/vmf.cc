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

#include "stackrel/vmf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stackrel/errors.h"
#include "stackrel/special_functions.h"

namespace stackrel {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kCollapseThreshold = 1e-12;

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void Add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void CheckData(std::span<const Embedding> data, int dim) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].vector.size() != dim) {
      throw ValidationError("dimension-mismatch",
                            "embedding " + std::to_string(i) + " has dimension " +
                                std::to_string(data[i].vector.size()) + ", expected " +
                                std::to_string(dim));
    }
  }
}

Eigen::MatrixXd StackRows(std::span<const Embedding> data, int dim) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(data.size()), dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    z.row(static_cast<Eigen::Index>(i)) = data[i].vector.transpose();
  }
  return z;
}

}  // namespace

Embedding MakeEmbedding(const Eigen::VectorXd& raw, DomainTag domain,
                        std::optional<int> label) {
  const double n = raw.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("unit-embedding", "cannot normalize a zero or non-finite vector");
  }
  return {raw / n, domain, label};
}

void ValidateVmfParams(const VmfParams& params) {
  if (params.dim() < 2) {
    throw ValidationError("vmf-dimension", "dimension must be at least 2");
  }
  if (std::abs(params.mean_direction.norm() - 1.0) > kUnitTolerance) {
    throw ValidationError("unit-mean", "mean direction norm " +
                                           std::to_string(params.mean_direction.norm()));
  }
  if (!(params.concentration >= 0.0) || !std::isfinite(params.concentration)) {
    throw ValidationError("concentration", "kappa must be finite and >= 0");
  }
}

void ValidateMixture(const VmfMixture& mixture) {
  if (mixture.components.empty()) {
    throw ValidationError("mixture-size", "mixture has no components");
  }
  if (mixture.weights.size() != mixture.components.size()) {
    throw ValidationError("mixture-size", "weights and components differ in length");
  }
  const int d = mixture.dim();
  double total = 0.0;
  for (std::size_t j = 0; j < mixture.size(); ++j) {
    ValidateVmfParams(mixture.components[j]);
    if (mixture.components[j].dim() != d) {
      throw ValidationError("dimension-mismatch", "components differ in dimension");
    }
    if (!(mixture.weights[j] >= 0.0)) {
      throw ValidationError("mixture-weights", "negative weight");
    }
    total += mixture.weights[j];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("mixture-weights", "weights sum to " + std::to_string(total));
  }
}

double LogVmfNormalizer(int dim, double kappa) {
  if (dim < 2) throw ValidationError("vmf-dimension", "dimension must be at least 2");
  const double half = 0.5 * dim;
  if (kappa < kUniformKappa) {
    return std::lgamma(half) - std::log(2.0) - half * std::log(std::numbers::pi);
  }
  return (half - 1.0) * std::log(kappa) - half * std::log(2.0 * std::numbers::pi) -
         LogBesselI(half - 1.0, kappa);
}

double VmfLogPdf(const Eigen::VectorXd& z, const VmfParams& params) {
  if (z.size() != params.dim()) {
    throw ValidationError("dimension-mismatch",
                          "point has dimension " + std::to_string(z.size()) +
                              ", distribution " + std::to_string(params.dim()));
  }
  const double log_c = LogVmfNormalizer(params.dim(), params.concentration);
  if (params.concentration < kUniformKappa) return log_c;
  return log_c + params.concentration * params.mean_direction.dot(z);
}

std::vector<Embedding> SampleVmf(const VmfParams& params, std::size_t n, Rng& rng) {
  ValidateVmfParams(params);
  const int d = params.dim();
  const Eigen::VectorXd& mu = params.mean_direction;
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto gaussian_vector = [&] {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = gauss(rng);
    return v;
  };

  std::vector<Embedding> out;
  out.reserve(n);
  if (params.concentration < kUniformKappa) {
    while (out.size() < n) {
      const Eigen::VectorXd v = gaussian_vector();
      const double norm = v.norm();
      if (norm > 1e-12) out.push_back({v / norm, {}, std::nullopt});
    }
    return out;
  }

  const double kappa = params.concentration;
  const double dm1 = d - 1.0;
  const double b = dm1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);
  std::gamma_distribution<double> gamma(0.5 * dm1, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  while (out.size() < n) {
    double w = 0.0;
    for (;;) {
      const double g1 = gamma(rng);
      const double g2 = gamma(rng);
      const double beta = g1 / (g1 + g2);
      w = (1.0 - (1.0 + b) * beta) / (1.0 - (1.0 - b) * beta);
      const double u = uniform(rng);
      if (kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
    }
    Eigen::VectorXd tangent;
    double tn = 0.0;
    do {
      tangent = gaussian_vector();
      tangent -= tangent.dot(mu) * mu;
      tn = tangent.norm();
    } while (tn < 1e-12);
    Eigen::VectorXd z = w * mu + std::sqrt(std::max(0.0, 1.0 - w * w)) * (tangent / tn);
    z /= z.norm();
    out.push_back({std::move(z), {}, std::nullopt});
  }
  return out;
}

double LogSumExp(std::span<const double> values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double v : values) s += std::exp(v - hi);
  return hi + std::log(s);
}

namespace {

// N x K matrix of log(pi_j) + log p(z_i | mu_j, kappa_j).
Eigen::MatrixXd LogJoint(const VmfMixture& mixture, std::span<const Embedding> data) {
  ValidateMixture(mixture);
  const int d = mixture.dim();
  CheckData(data, d);
  const Eigen::Index k = static_cast<Eigen::Index>(mixture.size());
  Eigen::MatrixXd means(d, k);
  Eigen::RowVectorXd kappas(k);
  Eigen::RowVectorXd offsets(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const VmfParams& c = mixture.components[static_cast<std::size_t>(j)];
    const bool uniform = c.concentration < kUniformKappa;
    means.col(j) = c.mean_direction;
    kappas[j] = uniform ? 0.0 : c.concentration;
    offsets[j] = std::log(mixture.weights[static_cast<std::size_t>(j)]) +
                 LogVmfNormalizer(d, c.concentration);
  }
  const Eigen::MatrixXd z = StackRows(data, d);
  Eigen::MatrixXd log_joint = (z * means).array().rowwise() * kappas.array();
  log_joint.rowwise() += offsets;
  return log_joint;
}

}  // namespace

Eigen::MatrixXd EStep(const VmfMixture& mixture, std::span<const Embedding> data,
                      double* log_likelihood) {
  Eigen::MatrixXd r = LogJoint(mixture, data);
  CompensatedSum total;
  std::vector<double> row(static_cast<std::size_t>(r.cols()));
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) row[static_cast<std::size_t>(j)] = r(i, j);
    const double lse = LogSumExp(row);
    if (!std::isfinite(lse)) {
      throw NumericalError("E-step row " + std::to_string(i) + " has zero total density");
    }
    total.Add(lse);
    r.row(i) = (r.row(i).array() - lse).exp();
  }
  if (log_likelihood) *log_likelihood = total.value();
  return r;
}

double MixtureLogLikelihood(const VmfMixture& mixture, std::span<const Embedding> data) {
  double ll = 0.0;
  EStep(mixture, data, &ll);
  return ll;
}

double ConcentrationFromResultant(double r, int dim, double kappa_max) {
  if (!(r > 0.0)) return 0.0;
  if (r >= 1.0) return kappa_max;
  const double kappa = (r * dim - r * r * r) / (1.0 - r * r);
  return std::clamp(kappa, 0.0, kappa_max);
}

double ConcentrationNewton(double r, int dim, double kappa_max) {
  double kappa = ConcentrationFromResultant(r, dim, kappa_max);
  if (kappa <= 0.0 || kappa >= kappa_max) return kappa;
  const double order = 0.5 * dim - 1.0;
  for (int iter = 0; iter < 50; ++iter) {
    const double a = BesselRatio(order, kappa);
    const double slope = 1.0 - a * a - (dim - 1.0) / kappa * a;
    if (!(slope > 0.0)) break;
    double next = kappa - (a - r) / slope;
    if (!(next > 0.0)) next = 0.5 * kappa;
    next = std::min(next, kappa_max);
    const bool done = std::abs(next - kappa) <= 1e-13 * kappa;
    kappa = next;
    if (done) break;
  }
  return std::clamp(kappa, 0.0, kappa_max);
}

VmfMixture MStep(const Eigen::MatrixXd& responsibilities, std::span<const Embedding> data,
                 const MStepOptions& options) {
  if (data.empty()) throw ValidationError("non-empty-data", "M-step needs data");
  if (responsibilities.rows() != static_cast<Eigen::Index>(data.size())) {
    throw ValidationError("dimension-mismatch", "responsibility rows != data size");
  }
  const int d = static_cast<int>(data.front().vector.size());
  CheckData(data, d);
  const Eigen::MatrixXd z = StackRows(data, d);
  const Eigen::MatrixXd resultants = responsibilities.transpose() * z;  // K x d
  const double n = static_cast<double>(data.size());

  VmfMixture out;
  for (Eigen::Index j = 0; j < responsibilities.cols(); ++j) {
    CompensatedSum mass_sum;
    for (Eigen::Index i = 0; i < responsibilities.rows(); ++i) mass_sum.Add(responsibilities(i, j));
    const double mass = mass_sum.value();
    if (!(mass >= kCollapseThreshold)) {
      throw ComponentCollapseError(static_cast<std::size_t>(j), mass);
    }
    const Eigen::VectorXd s = resultants.row(j).transpose();
    const double length = s.norm();
    VmfParams params;
    if (length > 0.0) {
      params.mean_direction = s / length;
    } else {
      params.mean_direction = Eigen::VectorXd::Unit(d, 0);
    }
    const double r = std::min(1.0, length / mass);
    params.concentration =
        options.concentration_update == ConcentrationUpdate::kNewton
            ? ConcentrationNewton(r, d, options.kappa_max)
            : ConcentrationFromResultant(r, d, options.kappa_max);
    out.components.push_back(std::move(params));
    out.weights.push_back(mass / n);
  }
  // Renormalize away rounding so the mixture invariant holds exactly enough.
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  return out;
}

EmFitResult FitVmfMixture(std::span<const Embedding> data, const VmfMixture& init,
                          const EmOptions& options) {
  if (data.empty()) throw ValidationError("non-empty-data", "EM needs data");
  ValidateMixture(init);
  EmFitResult result;
  result.mixture = init;
  double ll = 0.0;
  Eigen::MatrixXd resp = EStep(result.mixture, data, &ll);
  result.log_likelihood.push_back(ll);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    result.mixture = MStep(resp, data, options.m_step);
    double next_ll = 0.0;
    resp = EStep(result.mixture, data, &next_ll);
    result.log_likelihood.push_back(next_ll);
    result.iterations = iter + 1;
    const double gain = next_ll - ll;
    ll = next_ll;
    if (gain < options.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace stackrel
