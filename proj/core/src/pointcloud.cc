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

#include "stackrel/pointcloud.h"

#include <algorithm>
#include <set>
#include <string>

#include "stackrel/errors.h"

namespace stackrel {

Quaternion Quaternion::FromAxisAngle(const Point3& axis, double angle) {
  const double n = stackrel::Norm(axis);
  if (!(n > 0.0)) return {};
  const double s = std::sin(angle / 2.0) / n;
  return {std::cos(angle / 2.0), axis.x * s, axis.y * s, axis.z * s};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Point3 Quaternion::Rotate(const Point3& p) const {
  // v' = v + 2 w (u x v) + 2 u x (u x v), u = (x, y, z)
  const Point3 u{x, y, z};
  const Point3 t = 2.0 * Cross(u, p);
  return p + w * t + Cross(u, t);
}

RelationClass Reversed(RelationClass c) {
  switch (c) {
    case RelationClass::kParent:
      return RelationClass::kChild;
    case RelationClass::kChild:
      return RelationClass::kParent;
    case RelationClass::kNoRel:
      return RelationClass::kNoRel;
  }
  return RelationClass::kNoRel;
}

std::string_view ToString(RelationClass c) {
  switch (c) {
    case RelationClass::kParent:
      return "Parent";
    case RelationClass::kChild:
      return "Child";
    case RelationClass::kNoRel:
      return "NoRel";
  }
  return "NoRel";
}

std::optional<RelationClass> ParseRelationClass(std::string_view text) {
  if (text == "Parent") return RelationClass::kParent;
  if (text == "Child") return RelationClass::kChild;
  if (text == "NoRel") return RelationClass::kNoRel;
  return std::nullopt;
}

Point3 Centroid(const ObjectCloud& cloud) {
  Point3 sum;
  for (const Point3& p : cloud.points) sum += p;
  if (!cloud.points.empty()) sum *= 1.0 / static_cast<double>(cloud.points.size());
  return sum;
}

const ObjectCloud* Scene::Find(ObjectId id) const {
  for (const ObjectCloud& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

RelationClass Scene::Label(ObjectId a, ObjectId b) const {
  const auto it = labels.find({a, b});
  return it == labels.end() ? RelationClass::kNoRel : it->second;
}

std::size_t Scene::StackedPairCount() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](const auto& kv) {
        return kv.second == RelationClass::kParent;
      }));
}

void ValidateScene(const Scene& scene) {
  std::set<ObjectId> ids;
  for (const ObjectCloud& o : scene.objects) {
    if (o.points.empty()) {
      throw ValidationError("empty-cloud",
                            "object " + std::to_string(o.id) + " has no points");
    }
    for (std::size_t i = 0; i < o.points.size(); ++i) {
      if (!IsFinite(o.points[i])) {
        throw ValidationError("non-finite-point",
                              "object " + std::to_string(o.id) + " point " +
                                  std::to_string(i));
      }
    }
    if (!ids.insert(o.id).second) {
      throw ValidationError("duplicate-object-id",
                            "object id " + std::to_string(o.id));
    }
  }
  for (const auto& [pair, label] : scene.labels) {
    const auto& [a, b] = pair;
    if (!ids.count(a) || !ids.count(b)) {
      throw ValidationError("unknown-object",
                            "label (" + std::to_string(a) + ", " +
                                std::to_string(b) + ") references a missing id");
    }
    if (a == b) {
      throw ValidationError("self-label",
                            "object " + std::to_string(a) + " labeled with itself");
    }
    const auto rev = scene.labels.find({b, a});
    if (rev == scene.labels.end()) {
      throw ValidationError("missing-label",
                            "(" + std::to_string(b) + ", " + std::to_string(a) +
                                ") is unlabeled");
    }
    if (rev->second != Reversed(label)) {
      throw ValidationError(
          "antisymmetry", "(" + std::to_string(a) + ", " + std::to_string(b) +
                              ") is " + std::string(ToString(label)) + " but (" +
                              std::to_string(b) + ", " + std::to_string(a) +
                              ") is " + std::string(ToString(rev->second)));
    }
  }
  const std::size_t n = ids.size();
  if (scene.labels.size() != n * (n - (n > 0 ? 1 : 0))) {
    throw ValidationError("missing-label",
                          "expected labels for all " +
                              std::to_string(n * (n > 0 ? n - 1 : 0)) +
                              " ordered pairs, found " +
                              std::to_string(scene.labels.size()));
  }
  if (scene.camera_pose) {
    const Pose& pose = *scene.camera_pose;
    const Quaternion& q = pose.orientation;
    if (!IsFinite(pose.position) || !std::isfinite(q.Norm()) ||
        std::abs(q.Norm() - 1.0) > 1e-9) {
      throw ValidationError("non-unit-quaternion",
                            "camera pose must be finite with unit orientation");
    }
  }
}

void Canonicalize(Scene& scene) {
  std::sort(scene.objects.begin(), scene.objects.end(),
            [](const ObjectCloud& a, const ObjectCloud& b) { return a.id < b.id; });
}

Scene RigidTransform(const Scene& scene, const Quaternion& rotation,
                     const Point3& translation) {
  if (!std::isfinite(rotation.Norm()) || std::abs(rotation.Norm() - 1.0) > 1e-9) {
    throw ValidationError("non-unit-quaternion",
                          "rotation norm " + std::to_string(rotation.Norm()));
  }
  if (!IsFinite(translation)) {
    throw ValidationError("non-finite-point", "translation is not finite");
  }
  Scene out = scene;
  for (ObjectCloud& o : out.objects) {
    for (Point3& p : o.points) p = rotation.Rotate(p) + translation;
  }
  if (out.camera_pose) {
    out.camera_pose->position = rotation.Rotate(out.camera_pose->position) + translation;
    Quaternion q = rotation * out.camera_pose->orientation;
    const double n = q.Norm();
    q = {q.w / n, q.x / n, q.y / n, q.z / n};
    out.camera_pose->orientation = q;
  }
  return out;
}

}  // namespace stackrel
