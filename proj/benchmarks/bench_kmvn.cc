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

#include <random>
#include <vector>

#include "stackrel/kmvn.h"
#include "stackrel/rng.h"

namespace stackrel {
namespace {

std::vector<Point3> Cloud(std::size_t n, double z, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<Point3> pts(n);
  for (Point3& p : pts) p = {u(rng), u(rng), z + u(rng)};
  return pts;
}

void BM_SelectKmvn(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = Cloud(n, 0.15, rng);
  const auto b = Cloud(n, 0.0, rng);
  const KmvnOptions opt{.k = static_cast<std::size_t>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(SelectKmvn(a, b, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}
BENCHMARK(BM_SelectKmvn)->ArgsProduct({{128, 512, 1024}, {1, 50}});

void BM_AllPairFeatures(benchmark::State& state) {
  Rng rng(2);
  Scene scene;
  for (int i = 0; i < state.range(0); ++i) {
    scene.objects.push_back({i, std::nullopt, Cloud(512, 0.1 * i, rng)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(AllPairFeatures(scene));
}
BENCHMARK(BM_AllPairFeatures)->Arg(3)->Arg(8);

}  // namespace
}  // namespace stackrel

BENCHMARK_MAIN();
