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

#include "stackrel/scenesim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace stackrel {

namespace {

constexpr double kPi = std::numbers::pi;
// A stacked object's footprint circle may use at most this fraction of the
// supporter's inscribed radius.
constexpr double kStackFootprintFraction = 0.8;
constexpr double kMinStackedRadius = 0.012;
constexpr int kShapeDraws = 4;

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double Uniform(Rng& rng, const Range& r) {
  return r.min == r.max ? r.min : Uniform(rng, r.min, r.max);
}

void CheckRange(const Range& r, const char* name) {
  if (!(r.min > 0.0) || !(r.max >= r.min) || !std::isfinite(r.max)) {
    throw ValidationError(name, "range must satisfy 0 < min <= max");
  }
}

bool HasFlatTop(const Body& b) { return b.primitive != Primitive::kSphere; }

double InscribedTopRadius(const Body& b) {
  switch (b.primitive) {
    case Primitive::kBox:
      return std::min(b.half_x, b.half_y);
    case Primitive::kCylinder:
      return b.half_x;
    case Primitive::kSphere:
      return 0.0;
  }
  return 0.0;
}

Body SampleShape(const SceneConfig& config, Rng& rng) {
  Body b;
  const auto pick = std::uniform_int_distribution<std::size_t>(
      0, config.primitives.size() - 1)(rng);
  b.primitive = config.primitives[pick];
  switch (b.primitive) {
    case Primitive::kBox:
      b.half_x = 0.5 * Uniform(rng, config.box_side);
      b.half_y = 0.5 * Uniform(rng, config.box_side);
      b.height = Uniform(rng, config.box_height);
      b.yaw = Uniform(rng, 0.0, kPi);
      break;
    case Primitive::kCylinder:
      b.half_x = b.half_y = Uniform(rng, config.cylinder_radius);
      b.height = Uniform(rng, config.cylinder_height);
      break;
    case Primitive::kSphere:
      b.half_x = b.half_y = Uniform(rng, config.sphere_radius);
      b.height = 2.0 * b.half_x;
      break;
  }
  return b;
}

// Shrinks the footprint (and a sphere's height) by `s`.
void ScaleFootprint(Body& b, double s) {
  b.half_x *= s;
  b.half_y *= s;
  if (b.primitive == Primitive::kSphere) b.height = 2.0 * b.half_x;
}

double PlanarDistance(const Body& a, const Body& b) {
  return std::hypot(a.center_x - b.center_x, a.center_y - b.center_y);
}

bool FitsAmong(const Body& candidate, const std::vector<Body>& placed,
               const std::optional<ObjectId>& surface, double min_gap) {
  for (const Body& other : placed) {
    if (other.supporter != surface) continue;
    if (PlanarDistance(candidate, other) <
        candidate.FootprintRadius() + other.FootprintRadius() + min_gap) {
      return false;
    }
  }
  return true;
}

bool TryStack(const SceneConfig& config, Body& body, const std::vector<Body>& placed,
              Rng& rng) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < placed.size(); ++i) {
    if (HasFlatTop(placed[i]) &&
        kStackFootprintFraction * InscribedTopRadius(placed[i]) >= kMinStackedRadius) {
      order.push_back(i);
    }
  }
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t idx : order) {
    const Body& sup = placed[idx];
    Body cand = body;
    const double limit = kStackFootprintFraction * InscribedTopRadius(sup);
    if (cand.FootprintRadius() > limit) ScaleFootprint(cand, limit / cand.FootprintRadius());
    const double r = cand.FootprintRadius();
    const int attempts = std::max(1, config.max_retries / 4);
    for (int attempt = 0; attempt < attempts; ++attempt) {
      double u = 0.0;
      double v = 0.0;
      double clearance = 0.0;
      if (sup.primitive == Primitive::kBox) {
        const double su = sup.half_x - r;
        const double sv = sup.half_y - r;
        u = Uniform(rng, -su, su);
        v = Uniform(rng, -sv, sv);
        clearance = std::min(su - std::abs(u), sv - std::abs(v));
      } else {
        const double reach = sup.half_x - r;
        const double rho = reach * std::sqrt(Uniform(rng, 0.0, 1.0));
        const double phi = Uniform(rng, 0.0, 2.0 * kPi);
        u = rho * std::cos(phi);
        v = rho * std::sin(phi);
        clearance = reach - rho;
      }
      const double c = std::cos(sup.yaw);
      const double s = std::sin(sup.yaw);
      cand.center_x = sup.center_x + c * u - s * v;
      cand.center_y = sup.center_y + s * u + c * v;
      cand.base_z = sup.TopZ();
      cand.supporter = sup.id;
      cand.support_clearance = clearance;
      if (FitsAmong(cand, placed, cand.supporter, config.min_gap)) {
        body = cand;
        return true;
      }
    }
  }
  return false;
}

bool TryGround(const SceneConfig& config, Body& body, const std::vector<Body>& placed,
               Rng& rng) {
  const double r = body.FootprintRadius();
  const double reach = config.workspace_half_extent - r;
  if (reach < 0.0) return false;
  Body cand = body;
  cand.base_z = 0.0;
  cand.supporter.reset();
  cand.support_clearance.reset();
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    cand.center_x = Uniform(rng, -reach, reach);
    cand.center_y = Uniform(rng, -reach, reach);
    if (FitsAmong(cand, placed, std::nullopt, config.min_gap)) {
      body = cand;
      return true;
    }
  }
  return false;
}

std::string CategoryName(Primitive p) { return std::string(ToString(p)); }

}  // namespace

std::string_view ToString(Primitive p) {
  switch (p) {
    case Primitive::kBox:
      return "box";
    case Primitive::kCylinder:
      return "cylinder";
    case Primitive::kSphere:
      return "sphere";
  }
  return "box";
}

std::optional<Primitive> ParsePrimitive(std::string_view text) {
  if (text == "box") return Primitive::kBox;
  if (text == "cylinder") return Primitive::kCylinder;
  if (text == "sphere") return Primitive::kSphere;
  return std::nullopt;
}

double Body::FootprintRadius() const {
  return primitive == Primitive::kBox ? std::hypot(half_x, half_y) : half_x;
}

void ValidateSceneConfig(const SceneConfig& config) {
  if (config.min_objects < 2 || config.max_objects > 15 ||
      config.min_objects > config.max_objects) {
    throw ValidationError("n_objects", "object count range must lie within [2, 15]");
  }
  if (config.primitives.empty()) {
    throw ValidationError("primitives", "at least one primitive type is required");
  }
  CheckRange(config.box_side, "box_side");
  CheckRange(config.box_height, "box_height");
  CheckRange(config.cylinder_radius, "cylinder_radius");
  CheckRange(config.cylinder_height, "cylinder_height");
  CheckRange(config.sphere_radius, "sphere_radius");
  if (config.points_per_object < 1) {
    throw ValidationError("points_per_object", "must be at least 1");
  }
  if (!(config.stack_probability >= 0.0 && config.stack_probability <= 1.0)) {
    throw ValidationError("stack_probability", "must lie in [0, 1]");
  }
  if (!(config.workspace_half_extent > 0.0)) {
    throw ValidationError("workspace_half_extent", "must be positive");
  }
  if (!(config.min_gap >= 0.0)) throw ValidationError("min_gap", "must be >= 0");
  if (config.max_retries < 1) throw ValidationError("max_retries", "must be >= 1");
}

SimulatedScene GenerateScene(const SceneConfig& config, Rng& rng, std::string scene_id) {
  ValidateSceneConfig(config);
  const int n = std::uniform_int_distribution<int>(config.min_objects, config.max_objects)(rng);

  SimulatedScene out;
  out.scene.scene_id = std::move(scene_id);
  std::vector<Body>& placed = out.bodies;
  for (int i = 0; i < n; ++i) {
    Body body;
    bool ok = false;
    for (int draw = 0; draw < kShapeDraws && !ok; ++draw) {
      body = SampleShape(config, rng);
      body.id = i + 1;
      const bool want_stack =
          !placed.empty() && Uniform(rng, 0.0, 1.0) < config.stack_probability;
      ok = want_stack && TryStack(config, body, placed, rng);
      if (!ok) ok = TryGround(config, body, placed, rng);
      if (!ok && !want_stack) ok = TryStack(config, body, placed, rng);
    }
    if (!ok) {
      throw GenerationError("could not place object " + std::to_string(body.id) +
                            " in scene " + out.scene.scene_id + " after " +
                            std::to_string(config.max_retries) + " attempts");
    }
    placed.push_back(body);
  }

  for (const Body& b : placed) {
    ObjectCloud cloud;
    cloud.id = b.id;
    cloud.category = CategoryName(b.primitive);
    cloud.points = SampleSurface(b, config.points_per_object, rng);
    out.scene.objects.push_back(std::move(cloud));
  }

  for (const Body& a : placed) {
    for (const Body& b : placed) {
      if (a.id != b.id) out.scene.labels[{a.id, b.id}] = RelationClass::kNoRel;
    }
  }
  auto find = [&](ObjectId id) -> const Body& {
    return *std::find_if(placed.begin(), placed.end(),
                         [id](const Body& b) { return b.id == id; });
  };
  for (const Body& b : placed) {
    std::optional<ObjectId> sup = b.supporter;
    while (sup) {
      out.scene.labels[{*sup, b.id}] = RelationClass::kParent;
      out.scene.labels[{b.id, *sup}] = RelationClass::kChild;
      if (!config.transitive_support) break;
      sup = find(*sup).supporter;
    }
  }
  return out;
}

SimulatedScene GenerateScene(const SceneConfig& config, std::uint64_t index) {
  Rng rng = MakeRng(config.seed, "scene", index);
  char id[32];
  std::snprintf(id, sizeof(id), "scene_%05llu", static_cast<unsigned long long>(index));
  return GenerateScene(config, rng, id);
}

std::vector<Point3> SampleSurface(const Body& body, std::size_t count, Rng& rng) {
  std::vector<Point3> pts;
  pts.reserve(count);
  const double c = std::cos(body.yaw);
  const double s = std::sin(body.yaw);
  auto place = [&](double lx, double ly, double lz) {
    pts.push_back({body.center_x + c * lx - s * ly, body.center_y + s * lx + c * ly,
                   body.base_z + lz});
  };
  const double hx = body.half_x;
  const double hy = body.half_y;
  const double h = body.height;

  switch (body.primitive) {
    case Primitive::kBox: {
      const double cap = 4.0 * hx * hy;
      const double side_x = 2.0 * hy * h;  // faces normal to local x
      const double side_y = 2.0 * hx * h;
      std::discrete_distribution<int> face({cap, cap, side_x, side_x, side_y, side_y});
      for (std::size_t i = 0; i < count; ++i) {
        const int f = face(rng);
        const double a = Uniform(rng, -1.0, 1.0);
        const double b = Uniform(rng, 0.0, 1.0);
        switch (f) {
          case 0:
            place(a * hx, (2.0 * b - 1.0) * hy, h);
            break;
          case 1:
            place(a * hx, (2.0 * b - 1.0) * hy, 0.0);
            break;
          case 2:
            place(hx, a * hy, b * h);
            break;
          case 3:
            place(-hx, a * hy, b * h);
            break;
          case 4:
            place(a * hx, hy, b * h);
            break;
          default:
            place(a * hx, -hy, b * h);
            break;
        }
      }
      break;
    }
    case Primitive::kCylinder: {
      const double cap = kPi * hx * hx;
      const double side = 2.0 * kPi * hx * h;
      std::discrete_distribution<int> part({cap, cap, side});
      for (std::size_t i = 0; i < count; ++i) {
        const int p = part(rng);
        const double phi = Uniform(rng, 0.0, 2.0 * kPi);
        if (p == 2) {
          place(hx * std::cos(phi), hx * std::sin(phi), Uniform(rng, 0.0, h));
        } else {
          const double rho = hx * std::sqrt(Uniform(rng, 0.0, 1.0));
          place(rho * std::cos(phi), rho * std::sin(phi), p == 0 ? h : 0.0);
        }
      }
      break;
    }
    case Primitive::kSphere: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (std::size_t i = 0; i < count; ++i) {
        double x, y, z, n;
        do {
          x = gauss(rng);
          y = gauss(rng);
          z = gauss(rng);
          n = std::sqrt(x * x + y * y + z * z);
        } while (n < 1e-12);
        place(hx * x / n, hx * y / n, hx + hx * z / n);
      }
      break;
    }
  }
  return pts;
}

}  // namespace stackrel
