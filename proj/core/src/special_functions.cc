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

#include "stackrel/special_functions.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stackrel/errors.h"

namespace stackrel {

namespace {

constexpr double kSeriesLimit = 50.0;
constexpr double kRelTol = 1e-17;

// Ascending series from m = 0:
//   I_v(x) = (x/2)^v / Gamma(v+1) * sum_m t_m,  t_0 = 1,
//   t_m = t_{m-1} * (x^2/4) / (m (m + v)).
double AscendingSeries(double v, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double tail = 0.0;  // sum over m >= 1
  for (int m = 1; m < 100000; ++m) {
    term *= q / (m * (m + v));
    tail += term;
    if (m * (m + v) > q && term < kRelTol * (1.0 + tail)) break;
  }
  return v * std::log(0.5 * x) - std::lgamma(v + 1.0) + std::log1p(tail);
}

// Same series, normalized to its largest term so nothing overflows.
double ScaledSeries(double v, double x) {
  const double q = 0.25 * x * x;
  const double peak = std::floor(0.5 * (std::sqrt(v * v + x * x) - v));
  const double log_peak = (2.0 * peak + v) * std::log(0.5 * x) -
                          std::lgamma(peak + 1.0) - std::lgamma(peak + v + 1.0);
  double sum = 1.0;
  double term = 1.0;
  for (double m = peak + 1.0;; m += 1.0) {
    term *= q / (m * (m + v));
    sum += term;
    if (term < kRelTol * sum) break;
  }
  term = 1.0;
  for (double m = peak; m >= 1.0; m -= 1.0) {
    term *= (m * (m + v)) / q;
    sum += term;
    if (term < kRelTol * sum) break;
  }
  return log_peak + std::log(sum);
}

// I_v(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(v) / x^k. Returns NaN when
// the asymptotic terms stop shrinking before reaching full precision.
double LargeArgumentExpansion(double v, double x) {
  const double mu = 4.0 * v * v;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) > std::abs(term)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    term = next;
    sum += term;
    if (std::abs(term) < kRelTol * std::abs(sum)) {
      return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double LogBesselI(double order, double x) {
  if (!(order >= 0.0) || !std::isfinite(order)) {
    throw ValidationError("bessel-order", "order must be finite and >= 0, got " +
                                              std::to_string(order));
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw ValidationError("bessel-argument", "x must be finite and >= 0, got " +
                                                 std::to_string(x));
  }
  if (x == 0.0) {
    return order == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (x <= kSeriesLimit) return AscendingSeries(order, x);
  const double asymptotic = LargeArgumentExpansion(order, x);
  if (!std::isnan(asymptotic)) return asymptotic;
  return ScaledSeries(order, x);
}

double BesselRatio(double order, double x) {
  if (x == 0.0) return 0.0;
  return std::exp(LogBesselI(order + 1.0, x) - LogBesselI(order, x));
}

}  // namespace stackrel
