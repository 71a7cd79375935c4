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

#ifndef STACKREL_SCENESIM_H_
#define STACKREL_SCENESIM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stackrel/errors.h"
#include "stackrel/pointcloud.h"
#include "stackrel/rng.h"
#include "stackrel/vmf.h"

namespace stackrel {

// Synthetic stacked-object scenes: primitives resting on a ground plane or on
// each other, surface-sampled clouds, support labels, z-buffer partial views
// and view-shifted object embeddings.

enum class Primitive { kBox, kCylinder, kSphere };

std::string_view ToString(Primitive p);
std::optional<Primitive> ParsePrimitive(std::string_view text);

struct Range {
  double min = 0.0;
  double max = 0.0;
};

struct SceneConfig {
  int min_objects = 3;
  int max_objects = 8;
  std::vector<Primitive> primitives = {Primitive::kBox, Primitive::kCylinder,
                                       Primitive::kSphere};
  Range box_side{0.06, 0.22};
  Range box_height{0.03, 0.14};
  Range cylinder_radius{0.03, 0.10};
  Range cylinder_height{0.04, 0.16};
  Range sphere_radius{0.025, 0.06};
  std::size_t points_per_object = 1024;
  double stack_probability = 0.5;
  // Square table [-h, h]^2 on which ground objects are placed.
  double workspace_half_extent = 0.40;
  // Minimum horizontal gap between footprints of objects resting on the
  // same surface.
  double min_gap = 0.02;
  // Label every ancestor/descendant pair of a stack instead of direct
  // contact only.
  bool transitive_support = false;
  int max_retries = 200;
  std::uint64_t seed = 0;
};

// Throws ValidationError naming the offending field.
void ValidateSceneConfig(const SceneConfig& config);

class GenerationError : public Error {
 public:
  using Error::Error;
};

// Placed primitive. (center_x, center_y) is the footprint center, base_z the
// lowest point; yaw rotates boxes about +z.
struct Body {
  ObjectId id = 0;
  Primitive primitive = Primitive::kBox;
  double center_x = 0.0;
  double center_y = 0.0;
  double base_z = 0.0;
  double half_x = 0.0;  // box half extents; radius for cylinder and sphere
  double half_y = 0.0;
  double height = 0.0;
  double yaw = 0.0;
  std::optional<ObjectId> supporter;
  // Horizontal margin between this body's footprint circle and the edge of
  // its supporter's top face; unset for ground objects.
  std::optional<double> support_clearance;

  double FootprintRadius() const;
  double TopZ() const { return base_z + height; }
};

struct SimulatedScene {
  Scene scene;
  std::vector<Body> bodies;
};

// Deterministic given the generator state. Each object gets a few shape
// draws of max_retries placement attempts; GenerationError when all fail.
SimulatedScene GenerateScene(const SceneConfig& config, Rng& rng, std::string scene_id);

// Uses the "scene" sub-stream of config.seed at `index`; the scene id is
// "scene_%05d".
SimulatedScene GenerateScene(const SceneConfig& config, std::uint64_t index);

// Area-uniform surface samples of one primitive.
std::vector<Point3> SampleSurface(const Body& body, std::size_t count, Rng& rng);

// ---------------------------------------------------------------------------
// Rendering

struct CameraPose {
  Point3 position;
  Point3 look_at;
  int resolution = 256;  // pixels per z-buffer axis
  double field_of_view_deg = 60.0;
  double depth_tolerance = 0.01;  // meters
  int splat_radius = 2;           // pixels each point covers in the buffer
};

void ValidateCameraPose(const CameraPose& camera);

struct ViewSpec {
  std::string id;
  CameraPose pose;
  bool seen = false;
};

// Eight cameras on a ring around `center` plus one overhead camera. Views
// v0, v2, v4, v6 are marked seen.
std::vector<ViewSpec> NineViewRing(const Point3& center = {0.0, 0.0, 0.05},
                                   double ring_radius = 0.9, double ring_height = 0.75,
                                   double top_height = 1.2);

struct RenderResult {
  Scene scene;
  std::vector<ObjectId> omitted;  // objects with no visible point
};

// Keeps the points that are nearest to the camera within depth_tolerance at
// their pixel. Surviving points keep their order, so every output cloud is a
// subsequence of its input cloud. Labels involving omitted objects are
// dropped. Throws ValidationError("camera-inside-object") when the camera
// lies within an object's bounding sphere.
RenderResult RenderView(const Scene& scene, const CameraPose& camera,
                        std::optional<std::string> view_id = std::nullopt);

// World orientation of a camera looking from `position` at `look_at`; camera
// axes are x right, y up, z backward.
Quaternion LookAtOrientation(const Point3& position, const Point3& look_at);

// ---------------------------------------------------------------------------
// Embeddings

struct EmbeddingOptions {
  int dim = 16;
  double view_bias_scale = 2.0;
  double noise_scale = 0.05;
  std::uint64_t seed = 0;
};

// Category label used for embeddings: box 0, cylinder 1, sphere 2.
std::optional<int> CategoryIndex(const std::optional<std::string>& category);
inline constexpr int kNumCategories = 3;

// Object descriptor: normalized height, extents, footprint area and category
// one-hot, computed from the full cloud.
Eigen::VectorXd ObjectDescriptor(const ObjectCloud& cloud);

// One unit embedding per object visible from `view`: a fixed random
// projection of the descriptor plus a per-object perturbation and a
// per-view bias, normalized. With view_bias_scale == 0 the same object
// embeds identically from every view.
std::vector<Embedding> GenerateEmbeddings(const Scene& scene, const ViewSpec& view,
                                          DomainTag domain,
                                          const EmbeddingOptions& options);

}  // namespace stackrel

#endif  // STACKREL_SCENESIM_H_
