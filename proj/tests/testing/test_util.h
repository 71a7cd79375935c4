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

#ifndef STACKREL_TESTS_TESTING_TEST_UTIL_H_
#define STACKREL_TESTS_TESTING_TEST_UTIL_H_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "stackrel/kmvn.h"
#include "stackrel/pointcloud.h"
#include "stackrel/rng.h"
#include "stackrel/scenesim.h"

namespace stackrel::testing {

inline std::vector<Point3> RandomCloud(std::size_t n, Rng& rng, Point3 center = {},
                                       double spread = 0.1) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<Point3> pts(n);
  for (Point3& p : pts) p = {center.x + u(rng), center.y + u(rng), center.z + u(rng)};
  return pts;
}

// Axis-aligned box surface samples with the base at z0.
inline std::vector<Point3> BoxSurface(double cx, double cy, double z0, double hx, double hy,
                                      double h, std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  const double areas[] = {4 * hx * hy, 4 * hx * hy, 2 * hy * h, 2 * hy * h, 2 * hx * h,
                          2 * hx * h};
  std::discrete_distribution<int> face(std::begin(areas), std::end(areas));
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u(rng);
    const double b = t(rng);
    switch (face(rng)) {
      case 0: pts.push_back({cx + a * hx, cy + (2 * b - 1) * hy, z0 + h}); break;
      case 1: pts.push_back({cx + a * hx, cy + (2 * b - 1) * hy, z0}); break;
      case 2: pts.push_back({cx + hx, cy + a * hy, z0 + b * h}); break;
      case 3: pts.push_back({cx - hx, cy + a * hy, z0 + b * h}); break;
      case 4: pts.push_back({cx + a * hx, cy + hy, z0 + b * h}); break;
      default: pts.push_back({cx + a * hx, cy - hy, z0 + b * h}); break;
    }
  }
  return pts;
}

// Exhaustive KMVN reference: score every pair, sort, keep the first k.
inline KmvnResult KmvnBySort(const std::vector<Point3>& a, const std::vector<Point3>& b,
                             const KmvnOptions& options) {
  struct Row {
    double angle, dist, cosine;
    std::size_t i, j;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double dx = a[i].x - b[j].x;
      const double dy = a[i].y - b[j].y;
      const double dz = a[i].z - b[j].z;
      const double n = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (!(n > options.distance_epsilon)) continue;
      const double c = dz / n;
      const double r = options.selection == VerticalSelection::kLine ? std::abs(c) : c;
      const double angle = std::numbers::pi - std::acos(std::clamp(r, -1.0, 1.0));
      rows.push_back({angle, n, c, i, j});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.angle != y.angle) return x.angle > y.angle;
    if (x.dist != y.dist) return x.dist < y.dist;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  rows.resize(std::min(rows.size(), options.k));
  KmvnResult r;
  double sc = 0.0;
  double sd = 0.0;
  for (const Row& row : rows) {
    r.pairs.push_back({row.i, row.j});
    r.angles.push_back(row.angle);
    r.distances.push_back(row.dist);
    sc += row.cosine;
    sd += row.dist;
  }
  if (!rows.empty()) {
    r.z_op1 = std::clamp(sc / rows.size(), -1.0, 1.0);
    r.z_op2 = sd / rows.size();
  }
  return r;
}

// Central finite-difference gradient of f at x.
inline Eigen::VectorXd NumericGradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                       Eigen::VectorXd x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// max_i |a_i - b_i| / max(|b|_inf, floor).
inline double RelativeError(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            double floor = 1e-6) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

inline Eigen::VectorXd Flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

inline Eigen::MatrixXd Unflatten(const Eigen::VectorXd& v, Eigen::Index rows,
                                 Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

// A 44 cm keyboard leaning from the table onto the rim of a 12 cm mug and
// overhanging it by 2 cm. Object 1 is the keyboard, object 2 the mug.
inline Scene KeyboardOnMugScene(std::size_t points = 4096) {
  Rng rng(1);
  const double length = 0.44;
  const double height = 0.12;
  const double reach = length - 0.02;
  const double tilt = std::asin(height / reach);
  Body mug;
  mug.id = 2;
  mug.primitive = Primitive::kCylinder;
  mug.half_x = mug.half_y = 0.045;
  mug.height = height;
  mug.center_x = reach * std::cos(tilt) + mug.half_x;
  Body keyboard;
  keyboard.id = 1;
  keyboard.half_x = length / 2;
  keyboard.half_y = 0.075;
  keyboard.height = 0.02;
  std::vector<Point3> keys = SampleSurface(keyboard, points, rng);
  const Quaternion q = Quaternion::FromAxisAngle({0, 1, 0}, -tilt);
  for (Point3& p : keys) {
    p.x += length / 2;
    p = q.Rotate(p);
  }
  Scene scene;
  scene.scene_id = "keyboard_on_mug";
  scene.objects.push_back({1, "keyboard", std::move(keys)});
  scene.objects.push_back({2, "mug", SampleSurface(mug, points, rng)});
  scene.labels[{1, 2}] = RelationClass::kChild;
  scene.labels[{2, 1}] = RelationClass::kParent;
  return scene;
}

}  // namespace stackrel::testing

#endif  // STACKREL_TESTS_TESTING_TEST_UTIL_H_
