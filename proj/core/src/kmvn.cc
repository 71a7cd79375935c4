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

#include "stackrel/kmvn.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stackrel/errors.h"
#include "stackrel/parallel.h"

namespace stackrel {

namespace {

struct Candidate {
  double angle;
  double distance;
  double cosine;  // signed d.z / |d|
  double rank_cosine;  // cosine the ranking angle was computed from
  std::size_t ia;
  std::size_t ib;
};

// Total order: true when x ranks strictly ahead of y.
bool Ahead(const Candidate& x, const Candidate& y) {
  if (x.angle != y.angle) return x.angle > y.angle;
  if (x.distance != y.distance) return x.distance < y.distance;
  if (x.ia != y.ia) return x.ia < y.ia;
  return x.ib < y.ib;
}

// Below this cosine gap the angles of two pairs might round to the same value,
// so the cheap cosine pre-filter defers to the full comparison.
constexpr double kCosineGuard = 1e-12;

}  // namespace

double VerticalAngleFromCosine(double cosine) {
  return std::numbers::pi - std::acos(std::clamp(cosine, -1.0, 1.0));
}

std::optional<double> VerticalAngle(const Point3& direction, double epsilon) {
  const double n = std::sqrt(direction.x * direction.x + direction.y * direction.y +
                             direction.z * direction.z);
  if (!(n > epsilon)) return std::nullopt;
  return VerticalAngleFromCosine(direction.z / n);
}

KmvnResult SelectKmvn(std::span<const Point3> a, std::span<const Point3> b,
                      const KmvnOptions& options) {
  if (a.empty() || b.empty()) {
    throw ValidationError("empty-cloud", "KMVN needs two non-empty clouds");
  }
  if (options.k == 0) throw ValidationError("k-positive", "k must be at least 1");
  const bool line = options.selection == VerticalSelection::kLine;
  const std::size_t m = b.size();

  std::vector<double> bx(m), by(m), bz(m);
  for (std::size_t j = 0; j < m; ++j) {
    bx[j] = b[j].x;
    by[j] = b[j].y;
    bz[j] = b[j].z;
  }
  std::vector<double> dist(m), cosine(m);

  std::vector<Candidate> heap;  // worst kept candidate at heap.front()
  heap.reserve(options.k + 1);
  double threshold = -2.0;  // rank cosine of the worst kept pair once full

  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ax = a[i].x, ay = a[i].y, az = a[i].z;
    for (std::size_t j = 0; j < m; ++j) {
      const double dx = ax - bx[j];
      const double dy = ay - by[j];
      const double dz = az - bz[j];
      const double n = std::sqrt(dx * dx + dy * dy + dz * dz);
      dist[j] = n;
      cosine[j] = dz / n;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!(dist[j] > options.distance_epsilon)) continue;
      const double rank_cos = line ? std::abs(cosine[j]) : cosine[j];
      if (rank_cos < threshold - kCosineGuard) continue;
      const Candidate c{VerticalAngleFromCosine(rank_cos), dist[j], cosine[j],
                        rank_cos, i, j};
      if (heap.size() < options.k) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end(), Ahead);
        if (heap.size() == options.k) threshold = heap.front().rank_cosine;
      } else if (Ahead(c, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), Ahead);
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end(), Ahead);
        threshold = heap.front().rank_cosine;
      }
    }
  }

  if (heap.empty()) {
    throw DegenerateError("all point pairs are closer than the distance epsilon");
  }
  std::sort_heap(heap.begin(), heap.end(), Ahead);

  KmvnResult result;
  result.pairs.reserve(heap.size());
  result.angles.reserve(heap.size());
  result.distances.reserve(heap.size());
  double sum_cos = 0.0;
  double sum_dist = 0.0;
  for (const Candidate& c : heap) {
    result.pairs.push_back({c.ia, c.ib});
    result.angles.push_back(c.angle);
    result.distances.push_back(c.distance);
    sum_cos += c.cosine;
    sum_dist += c.distance;
  }
  const double k = static_cast<double>(heap.size());
  result.z_op1 = std::clamp(sum_cos / k, -1.0, 1.0);
  result.z_op2 = sum_dist / k;
  return result;
}

KmvnResult SelectKmvn(const ObjectCloud& a, const ObjectCloud& b,
                      const KmvnOptions& options) {
  return SelectKmvn(std::span<const Point3>(a.points),
                    std::span<const Point3>(b.points), options);
}

std::array<double, 2> PairFeatures(const ObjectCloud& a, const ObjectCloud& b,
                                   const KmvnOptions& options) {
  return SelectKmvn(a, b, options).z_u();
}

double CentroidZGap(const ObjectCloud& a, const ObjectCloud& b) {
  if (a.points.empty() || b.points.empty()) {
    throw ValidationError("empty-cloud", "centroid of an empty cloud");
  }
  return Centroid(a).z - Centroid(b).z;
}

namespace {

KmvnResult ReverseResult(const KmvnResult& forward) {
  KmvnResult r = forward;
  for (PointPair& p : r.pairs) std::swap(p.index_a, p.index_b);
  r.z_op1 = -forward.z_op1;
  return r;
}

}  // namespace

std::vector<OrderedPairFeatures> AllPairFeatures(const Scene& scene,
                                                 const KmvnOptions& options,
                                                 std::size_t jobs) {
  const std::size_t n = scene.objects.size();
  const bool line = options.selection == VerticalSelection::kLine;
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (line && j < i)) continue;
      tasks.emplace_back(i, j);
    }
  }
  std::vector<OrderedPairFeatures> computed(tasks.size());
  ParallelFor(tasks.size(), jobs, [&](std::size_t t) {
    const auto [i, j] = tasks[t];
    OrderedPairFeatures& out = computed[t];
    out.a = scene.objects[i].id;
    out.b = scene.objects[j].id;
    try {
      out.kmvn = SelectKmvn(scene.objects[i], scene.objects[j], options);
    } catch (const DegenerateError&) {
      out.degenerate = true;
    }
  });
  if (!line) return computed;

  std::vector<OrderedPairFeatures> all;
  all.reserve(n * (n > 0 ? n - 1 : 0));
  std::size_t t = 0;
  // Re-emit in (i, j) row-major order with reverse pairs derived.
  std::vector<std::vector<const OrderedPairFeatures*>> index(n, std::vector<const OrderedPairFeatures*>(n, nullptr));
  for (const auto& [i, j] : tasks) index[i][j] = &computed[t++];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (i < j) {
        all.push_back(*index[i][j]);
      } else {
        const OrderedPairFeatures& fwd = *index[j][i];
        OrderedPairFeatures rev;
        rev.a = fwd.b;
        rev.b = fwd.a;
        rev.degenerate = fwd.degenerate;
        if (!fwd.degenerate) rev.kmvn = ReverseResult(fwd.kmvn);
        all.push_back(std::move(rev));
      }
    }
  }
  return all;
}

}  // namespace stackrel
