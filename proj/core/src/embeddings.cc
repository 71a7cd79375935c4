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

#include <algorithm>
#include <cmath>

#include "stackrel/scenesim.h"

namespace stackrel {

namespace {

constexpr int kDescriptorSize = 4 + kNumCategories;
constexpr double kCategoryScale = 2.0;

Eigen::VectorXd GaussianVector(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  return v;
}

}  // namespace

std::optional<int> CategoryIndex(const std::optional<std::string>& category) {
  if (!category) return std::nullopt;
  if (const auto p = ParsePrimitive(*category)) return static_cast<int>(*p);
  return std::nullopt;
}

Eigen::VectorXd ObjectDescriptor(const ObjectCloud& cloud) {
  if (cloud.points.empty()) throw DegenerateError("object " + std::to_string(cloud.id) + " has no points");
  Point3 lo = cloud.points.front();
  Point3 hi = lo;
  for (const Point3& p : cloud.points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double ex = hi.x - lo.x;
  const double ey = hi.y - lo.y;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(kDescriptorSize);
  d[0] = (hi.z - lo.z) / 0.2;
  d[1] = std::max(ex, ey) / 0.2;
  d[2] = std::min(ex, ey) / 0.2;
  d[3] = ex * ey / 0.04;
  if (const auto c = CategoryIndex(cloud.category)) d[4 + *c] = kCategoryScale;
  return d;
}

std::vector<Embedding> GenerateEmbeddings(const Scene& scene, const ViewSpec& view,
                                          DomainTag domain,
                                          const EmbeddingOptions& options) {
  if (options.dim < 2) throw ValidationError("dim", "embedding dimension must be >= 2");
  if (!(options.view_bias_scale >= 0.0) || !(options.noise_scale >= 0.0)) {
    throw ValidationError("embedding-scale", "bias and noise scales must be >= 0");
  }
  Rng proj_rng = MakeRng(options.seed, "embed-projection");
  Eigen::MatrixXd projection(options.dim, kDescriptorSize);
  for (int c = 0; c < kDescriptorSize; ++c) {
    projection.col(c) = GaussianVector(options.dim, proj_rng);
  }
  Rng bias_rng = MakeRng(options.seed, "embed-view", StableHash(view.id));
  Eigen::VectorXd bias = GaussianVector(options.dim, bias_rng);
  bias *= options.view_bias_scale / bias.norm();

  const RenderResult visible = RenderView(scene, view.pose, view.id);
  std::vector<Embedding> out;
  for (const ObjectCloud& obj : scene.objects) {
    if (!visible.scene.Find(obj.id)) continue;
    Rng noise_rng = MakeRng(options.seed, "embed-noise",
                            StableHash(scene.scene_id + "/" + std::to_string(obj.id)));
    const Eigen::VectorXd raw = projection * ObjectDescriptor(obj) +
                                options.noise_scale * GaussianVector(options.dim, noise_rng) +
                                bias;
    out.push_back(MakeEmbedding(raw, domain, CategoryIndex(obj.category)));
  }
  return out;
}

}  // namespace stackrel
