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
#include <limits>
#include <numbers>
#include <string>

#include "stackrel/scenesim.h"

namespace stackrel {

namespace {

struct CameraFrame {
  Point3 right;
  Point3 up;
  Point3 forward;
};

Point3 Normalized(const Point3& p) { return p * (1.0 / Norm(p)); }

CameraFrame MakeFrame(const Point3& position, const Point3& look_at) {
  CameraFrame f;
  f.forward = Normalized(look_at - position);
  Point3 world_up{0.0, 0.0, 1.0};
  if (Norm(Cross(f.forward, world_up)) < 1e-6) world_up = {0.0, 1.0, 0.0};
  f.right = Normalized(Cross(f.forward, world_up));
  f.up = Cross(f.right, f.forward);
  return f;
}

Quaternion FromRotationColumns(const Point3& c0, const Point3& c1, const Point3& c2) {
  const double m00 = c0.x, m10 = c0.y, m20 = c0.z;
  const double m01 = c1.x, m11 = c1.y, m21 = c1.z;
  const double m02 = c2.x, m12 = c2.y, m22 = c2.z;
  Quaternion q;
  const double trace = m00 + m11 + m22;
  if (trace > 0.0) {
    const double s = 2.0 * std::sqrt(trace + 1.0);
    q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
  } else if (m00 > m11 && m00 > m22) {
    const double s = 2.0 * std::sqrt(1.0 + m00 - m11 - m22);
    q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
  } else if (m11 > m22) {
    const double s = 2.0 * std::sqrt(1.0 + m11 - m00 - m22);
    q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m22 - m00 - m11);
    q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
  }
  const double n = q.Norm();
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

// A splat pixel at offset o from the projected point records the depth plus
// kSplatSlope * |o| pixel widths, so a surface does not hide its own points
// unless it turns away from the camera steeper than this slope.
constexpr double kSplatSlope = 3.0;

}  // namespace

void ValidateCameraPose(const CameraPose& camera) {
  if (!IsFinite(camera.position) || !IsFinite(camera.look_at)) {
    throw ValidationError("camera-pose", "camera position and target must be finite");
  }
  if (Norm(camera.look_at - camera.position) < 1e-9) {
    throw ValidationError("camera-pose", "camera target coincides with its position");
  }
  if (camera.resolution < 1) throw ValidationError("resolution", "must be >= 1");
  if (!(camera.field_of_view_deg > 0.0 && camera.field_of_view_deg < 180.0)) {
    throw ValidationError("field_of_view_deg", "must lie in (0, 180)");
  }
  if (!(camera.depth_tolerance >= 0.0)) {
    throw ValidationError("depth_tolerance", "must be >= 0");
  }
  if (camera.splat_radius < 0) throw ValidationError("splat_radius", "must be >= 0");
}

Quaternion LookAtOrientation(const Point3& position, const Point3& look_at) {
  // Camera axes in world coordinates: x right, y down, z forward.
  const CameraFrame f = MakeFrame(position, look_at);
  return FromRotationColumns(f.right, -f.up, f.forward);
}

std::vector<ViewSpec> NineViewRing(const Point3& center, double ring_radius,
                                   double ring_height, double top_height) {
  std::vector<ViewSpec> views;
  for (int i = 0; i < 8; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / 8.0;
    ViewSpec v;
    v.id = "v" + std::to_string(i);
    v.pose.position = {center.x + ring_radius * std::cos(phi),
                       center.y + ring_radius * std::sin(phi), ring_height};
    v.pose.look_at = center;
    v.seen = i % 2 == 0;
    views.push_back(v);
  }
  ViewSpec top;
  top.id = "v8";
  top.pose.position = {center.x, center.y, top_height};
  top.pose.look_at = center;
  views.push_back(top);
  return views;
}

RenderResult RenderView(const Scene& scene, const CameraPose& camera,
                        std::optional<std::string> view_id) {
  ValidateCameraPose(camera);
  for (const ObjectCloud& obj : scene.objects) {
    if (obj.points.empty()) continue;
    const Point3 c = Centroid(obj);
    double radius = 0.0;
    for (const Point3& p : obj.points) radius = std::max(radius, Norm(p - c));
    if (Norm(camera.position - c) <= radius) {
      throw ValidationError("camera-inside-object",
                            "camera lies inside the bounding sphere of object " +
                                std::to_string(obj.id));
    }
  }

  const CameraFrame frame = MakeFrame(camera.position, camera.look_at);
  const int res = camera.resolution;
  const double half = 0.5 * res;
  const double focal =
      half / std::tan(0.5 * camera.field_of_view_deg * std::numbers::pi / 180.0);

  struct Projected {
    int u = -1;
    int v = -1;
    double depth = 0.0;
  };
  std::vector<std::vector<Projected>> projected(scene.objects.size());
  std::vector<double> zbuf(static_cast<std::size_t>(res) * res,
                           std::numeric_limits<double>::infinity());
  const int r = camera.splat_radius;
  for (std::size_t o = 0; o < scene.objects.size(); ++o) {
    const auto& pts = scene.objects[o].points;
    projected[o].resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point3 rel = pts[i] - camera.position;
      const double depth = Dot(rel, frame.forward);
      if (depth <= 1e-9) continue;
      const double px = half + focal * Dot(rel, frame.right) / depth;
      const double py = half - focal * Dot(rel, frame.up) / depth;
      if (!(px >= 0.0 && px < res && py >= 0.0 && py < res)) continue;
      Projected& pr = projected[o][i];
      pr.u = static_cast<int>(px);
      pr.v = static_cast<int>(py);
      pr.depth = depth;
      for (int dv = -r; dv <= r; ++dv) {
        const int vv = pr.v + dv;
        if (vv < 0 || vv >= res) continue;
        for (int du = -r; du <= r; ++du) {
          const int uu = pr.u + du;
          if (uu < 0 || uu >= res) continue;
          double& cell = zbuf[static_cast<std::size_t>(vv) * res + uu];
          const double spread = std::hypot(du, dv) * depth / focal * kSplatSlope;
          cell = std::min(cell, depth + spread);
        }
      }
    }
  }

  RenderResult out;
  out.scene.scene_id = scene.scene_id;
  out.scene.view_id = view_id ? view_id : scene.view_id;
  out.scene.camera_pose =
      Pose{camera.position, LookAtOrientation(camera.position, camera.look_at)};
  for (std::size_t o = 0; o < scene.objects.size(); ++o) {
    const ObjectCloud& obj = scene.objects[o];
    ObjectCloud visible{obj.id, obj.category, {}};
    for (std::size_t i = 0; i < obj.points.size(); ++i) {
      const Projected& pr = projected[o][i];
      if (pr.u < 0) continue;
      if (pr.depth <= zbuf[static_cast<std::size_t>(pr.v) * res + pr.u] +
                          camera.depth_tolerance) {
        visible.points.push_back(obj.points[i]);
      }
    }
    if (visible.points.empty()) {
      out.omitted.push_back(obj.id);
    } else {
      out.scene.objects.push_back(std::move(visible));
    }
  }
  for (const auto& [pair, cls] : scene.labels) {
    if (out.scene.Find(pair.first) && out.scene.Find(pair.second)) {
      out.scene.labels.emplace(pair, cls);
    }
  }
  return out;
}

}  // namespace stackrel
