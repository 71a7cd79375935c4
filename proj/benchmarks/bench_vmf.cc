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


#include <benchmark/benchmark.h>

#include <vector>

#include "stackrel/rng.h"
#include "stackrel/vmf.h"

namespace stackrel {
namespace {

std::vector<Embedding> TwoClusters(int dim, std::size_t n) {
  Rng rng(3);
  std::vector<Embedding> data =
      SampleVmf({Eigen::VectorXd::Unit(dim, 0), 30.0}, n / 2, rng);
  const auto more = SampleVmf({Eigen::VectorXd::Unit(dim, 1), 30.0}, n - n / 2, rng);
  data.insert(data.end(), more.begin(), more.end());
  return data;
}

VmfMixture Init(int dim) {
  return {{{Eigen::VectorXd::Ones(dim).normalized(), 1.0},
           {(Eigen::VectorXd::Unit(dim, 1) + Eigen::VectorXd::Unit(dim, 2)).normalized(), 1.0}},
          {0.5, 0.5}};
}

void BM_LogVmfNormalizer(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  double kappa = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(LogVmfNormalizer(dim, kappa));
    kappa = kappa < 500.0 ? kappa * 1.1 : 0.5;
  }
}
BENCHMARK(BM_LogVmfNormalizer)->Arg(3)->Arg(16)->Arg(128);

void BM_SampleVmf(benchmark::State& state) {
  Rng rng(4);
  const VmfParams p{Eigen::VectorXd::Unit(static_cast<int>(state.range(0)), 0), 20.0};
  for (auto _ : state) benchmark::DoNotOptimize(SampleVmf(p, 1000, rng));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleVmf)->Arg(3)->Arg(16);

void BM_EStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto data = TwoClusters(dim, 1000);
  const VmfMixture mixture = Init(dim);
  for (auto _ : state) benchmark::DoNotOptimize(EStep(mixture, data));
}
BENCHMARK(BM_EStep)->Arg(3)->Arg(16);

void BM_FitVmfMixture(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto data = TwoClusters(dim, 600);
  const VmfMixture init = Init(dim);
  for (auto _ : state) benchmark::DoNotOptimize(FitVmfMixture(data, init));
}
BENCHMARK(BM_FitVmfMixture)->Arg(3)->Arg(16);

}  // namespace
}  // namespace stackrel

BENCHMARK_MAIN();
