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

#include "stackrel/scenesim.h"

namespace stackrel {
namespace {

void BM_GenerateScene(benchmark::State& state) {
  SceneConfig config;
  config.points_per_object = static_cast<std::size_t>(state.range(0));
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(GenerateScene(config, index++));
}
BENCHMARK(BM_GenerateScene)->Arg(256)->Arg(1024);

void BM_RenderView(benchmark::State& state) {
  SceneConfig config;
  const Scene scene = GenerateScene(config, 0).scene;
  const ViewSpec view = NineViewRing().front();
  for (auto _ : state) benchmark::DoNotOptimize(RenderView(scene, view.pose, view.id));
}
BENCHMARK(BM_RenderView);

}  // namespace
}  // namespace stackrel

BENCHMARK_MAIN();
