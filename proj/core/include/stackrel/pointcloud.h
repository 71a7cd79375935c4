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

#ifndef STACKREL_POINTCLOUD_H_
#define STACKREL_POINTCLOUD_H_

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stackrel {

// World-frame point in meters. +z is gravity-up throughout the library.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;

  Point3& operator+=(const Point3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Point3& operator-=(const Point3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Point3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend Point3 operator+(Point3 a, const Point3& b) { return a += b; }
  friend Point3 operator-(Point3 a, const Point3& b) { return a -= b; }
  friend Point3 operator*(Point3 a, double s) { return a *= s; }
  friend Point3 operator*(double s, Point3 a) { return a *= s; }
  friend Point3 operator-(const Point3& a) { return {-a.x, -a.y, -a.z}; }
};

inline double Dot(const Point3& a, const Point3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Point3 Cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double Norm(const Point3& a) { return std::sqrt(Dot(a, a)); }
inline bool IsFinite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// Unit quaternion (w, x, y, z) for rotations.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Quaternion&, const Quaternion&) = default;

  static Quaternion FromAxisAngle(const Point3& axis, double angle);

  double Norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quaternion Conjugate() const { return {w, -x, -y, -z}; }
  Point3 Rotate(const Point3& p) const;

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
};

struct Pose {
  Point3 position;
  Quaternion orientation;

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Relation of the ordered pair (A, B). kParent: A supports B, so B has to be
// removed first. kChild: the reverse. Declaration order is the tie-break
// order used by classifiers.
enum class RelationClass : std::uint8_t { kParent = 0, kChild = 1, kNoRel = 2 };

inline constexpr int kNumRelationClasses = 3;

// Label of (B, A) given the label of (A, B).
RelationClass Reversed(RelationClass c);
std::string_view ToString(RelationClass c);
std::optional<RelationClass> ParseRelationClass(std::string_view text);

using ObjectId = std::int64_t;
using OrderedPair = std::pair<ObjectId, ObjectId>;

struct ObjectCloud {
  ObjectId id = 0;
  std::optional<std::string> category;
  std::vector<Point3> points;

  friend bool operator==(const ObjectCloud&, const ObjectCloud&) = default;
};

Point3 Centroid(const ObjectCloud& cloud);

struct Scene {
  std::string scene_id;
  std::vector<ObjectCloud> objects;
  std::map<OrderedPair, RelationClass> labels;
  std::optional<std::string> view_id;
  std::optional<Pose> camera_pose;

  friend bool operator==(const Scene&, const Scene&) = default;

  const ObjectCloud* Find(ObjectId id) const;
  // Relation of (a, b); kNoRel when the pair is unlabeled.
  RelationClass Label(ObjectId a, ObjectId b) const;
  // Number of Parent labels, i.e. directly stacked unordered pairs.
  std::size_t StackedPairCount() const;
};

// Throws ValidationError naming the first failed check:
//   "empty-cloud", "non-finite-point", "duplicate-object-id",
//   "unknown-object", "self-label", "missing-label", "antisymmetry",
//   "non-unit-quaternion".
void ValidateScene(const Scene& scene);

// Sorts objects by id; labels are kept in a sorted map already.
void Canonicalize(Scene& scene);

// Maps every point p to R p + t. Labels and ids are untouched; a camera pose,
// when present, moves with the scene. Throws ValidationError when
// |rotation| deviates from 1 by more than 1e-9.
Scene RigidTransform(const Scene& scene, const Quaternion& rotation,
                     const Point3& translation);

}  // namespace stackrel

#endif  // STACKREL_POINTCLOUD_H_
