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

#ifndef STACKREL_KMVN_H_
#define STACKREL_KMVN_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stackrel/pointcloud.h"

namespace stackrel {

// K Maximum Vertical Neighbors: the k point pairs between two objects whose
// connecting directions are closest to the world up-axis, and the relative
// position features derived from them.

inline constexpr std::size_t kDefaultKmvnK = 50;
inline constexpr double kDistanceEpsilon = 1e-9;

// Which direction's vertical angle ranks a pair.
enum class VerticalSelection {
  // Rank by the vertical angle of the connecting line oriented upward,
  // V = pi - arccos(|d.z| / |d|). Selection is symmetric in the two objects,
  // so swapping them reverses the selected pairs and negates z_op1.
  kLine,
  // Rank by the vertical angle of d = a - b itself, V = pi - arccos(d.z / |d|).
  kDirected,
};

struct KmvnOptions {
  std::size_t k = kDefaultKmvnK;
  double distance_epsilon = kDistanceEpsilon;
  VerticalSelection selection = VerticalSelection::kLine;
};

struct PointPair {
  std::size_t index_a = 0;
  std::size_t index_b = 0;

  friend bool operator==(const PointPair&, const PointPair&) = default;
};

struct KmvnResult {
  std::vector<PointPair> pairs;
  std::vector<double> angles;     // ranking angle of each pair, non-increasing
  std::vector<double> distances;  // |a_i - b_j| of each pair
  double z_op1 = 0.0;             // mean of d.z / |d|, in [-1, 1]
  double z_op2 = 0.0;             // mean of |d|, meters

  std::array<double, 2> z_u() const { return {z_op1, z_op2}; }
};

// pi - arccos(clamp(c, -1, 1)) for the cosine c between a direction and +z.
double VerticalAngleFromCosine(double cosine);

// V = pi - arccos(d.z / |d|) in [0, pi]: pi straight up, pi/2 horizontal,
// 0 straight down. nullopt when |d| <= epsilon (degenerate pair).
std::optional<double> VerticalAngle(const Point3& direction,
                                    double epsilon = kDistanceEpsilon);

// Selects min(k, #non-degenerate pairs) pairs over all n*m directed pairs
// d = a_i - b_j, ordered by angle descending, then distance ascending, then
// (index_a, index_b) ascending. Pairs with |d| <= epsilon are skipped.
// Runs a bounded heap of size k; nothing of size n*m is allocated.
// Throws ValidationError on empty clouds or k == 0, DegenerateError when
// every pair is degenerate.
KmvnResult SelectKmvn(std::span<const Point3> a, std::span<const Point3> b,
                      const KmvnOptions& options = {});
KmvnResult SelectKmvn(const ObjectCloud& a, const ObjectCloud& b,
                      const KmvnOptions& options = {});

// [z_op1, z_op2] of SelectKmvn(a, b).
std::array<double, 2> PairFeatures(const ObjectCloud& a, const ObjectCloud& b,
                                   const KmvnOptions& options = {});

// mean_z(a) - mean_z(b). Baseline that KMVN is compared against.
double CentroidZGap(const ObjectCloud& a, const ObjectCloud& b);

// Features of one ordered object pair inside a scene. `degenerate` is set
// when SelectKmvn threw DegenerateError; the result is then empty.
struct OrderedPairFeatures {
  ObjectId a = 0;
  ObjectId b = 0;
  bool degenerate = false;
  KmvnResult kmvn;
};

// All ordered pairs of distinct objects, (a, b) sorted by object order in the
// scene. Under kLine the reverse direction is derived from the forward one.
// Independent pairs are evaluated on up to `jobs` threads.
std::vector<OrderedPairFeatures> AllPairFeatures(const Scene& scene,
                                                 const KmvnOptions& options = {},
                                                 std::size_t jobs = 1);

}  // namespace stackrel

#endif  // STACKREL_KMVN_H_
