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

#include "stackrel/dataset.h"

#include <cmath>
#include <nlohmann/json.hpp>

#include "stackrel/embedding_io.h"
#include "stackrel/errors.h"
#include "stackrel/eval.h"
#include "stackrel/io_util.h"
#include "stackrel/parallel.h"

namespace stackrel {

namespace {

using nlohmann::json;

json PointJson(const Point3& p) { return json::array({p.x, p.y, p.z}); }

Point3 PointFrom(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

void ValidateDatasetOptions(const DatasetOptions& options) {
  ValidateSceneConfig(options.scene);
  if (options.num_scenes < 1) throw ValidationError("scenes", "must generate at least 1 scene");
  if (!(options.val_fraction >= 0.0 && options.val_fraction <= 1.0)) {
    throw ValidationError("val_fraction", "must lie in [0, 1]");
  }
  for (const ViewSpec& v : options.views) ValidateCameraPose(v.pose);
}

Manifest GenerateDataset(const DatasetOptions& options, const std::filesystem::path& out_dir) {
  ValidateDatasetOptions(options);
  const std::size_t n = static_cast<std::size_t>(options.num_scenes);
  const auto val = static_cast<std::size_t>(std::lround(options.val_fraction * n));
  const std::string ext = options.format == SceneFormat::kBinary ? ".stkr" : ".json";

  Manifest manifest;
  manifest.seed = options.scene.seed;
  manifest.views = options.views;
  manifest.base_dir = out_dir;
  manifest.scenes.resize(n);
  std::vector<std::vector<Embedding>> embeddings(n);

  ParallelFor(n, options.jobs, [&](std::size_t i) {
    const SimulatedScene sim = GenerateScene(options.scene, i);
    const Scene& scene = sim.scene;
    ManifestScene& entry = manifest.scenes[i];
    entry.scene_id = scene.scene_id;
    entry.split = i + val >= n ? "val" : "train";
    entry.object_count = scene.objects.size();
    entry.stacked_pairs = scene.StackedPairCount();
    entry.difficulty = std::string(ToString(DifficultyOf(entry.stacked_pairs)));
    const std::string dir = "scenes/" + scene.scene_id + "/";
    std::filesystem::create_directories(out_dir / dir);
    entry.full_path = dir + "full" + ext;
    SaveScene(scene, out_dir / entry.full_path, options.format);

    int source_index = 0;
    for (const ViewSpec& view : options.views) {
      const RenderResult r = RenderView(scene, view.pose, view.id);
      ManifestRender render{view.id, dir + view.id + ext, view.seen, r.omitted};
      SaveScene(r.scene, out_dir / render.path, options.format);
      entry.renders.push_back(std::move(render));
      if (options.embeddings) {
        const DomainTag domain = view.seen ? DomainTag::Source(source_index) : DomainTag::Target();
        auto e = GenerateEmbeddings(scene, view, domain, options.embedding);
        embeddings[i].insert(embeddings[i].end(), e.begin(), e.end());
      }
      if (view.seen) ++source_index;
    }
  });

  if (options.embeddings) {
    std::vector<Embedding> all;
    for (auto& e : embeddings) all.insert(all.end(), e.begin(), e.end());
    manifest.embeddings_path = "embeddings.json";
    WriteFileAtomic(out_dir / manifest.embeddings_path, EmbeddingsToJson(all));
  }
  WriteFileAtomic(out_dir / "manifest.json", ManifestToJson(manifest));
  return manifest;
}

std::string ManifestToJson(const Manifest& manifest) {
  json doc = json::object();
  doc["seed"] = manifest.seed;
  json views = json::array();
  for (const ViewSpec& v : manifest.views) {
    views.push_back({{"id", v.id},
                     {"seen", v.seen},
                     {"position", PointJson(v.pose.position)},
                     {"look_at", PointJson(v.pose.look_at)},
                     {"resolution", v.pose.resolution},
                     {"field_of_view_deg", v.pose.field_of_view_deg},
                     {"depth_tolerance", v.pose.depth_tolerance},
                     {"splat_radius", v.pose.splat_radius}});
  }
  doc["views"] = std::move(views);
  json scenes = json::array();
  for (const ManifestScene& s : manifest.scenes) {
    json renders = json::array();
    for (const ManifestRender& r : s.renders) {
      renders.push_back(
          {{"view", r.view}, {"path", r.path}, {"seen", r.seen}, {"omitted", r.omitted}});
    }
    scenes.push_back({{"scene_id", s.scene_id},
                      {"split", s.split},
                      {"object_count", s.object_count},
                      {"stacked_pairs", s.stacked_pairs},
                      {"difficulty", s.difficulty},
                      {"full", s.full_path},
                      {"renders", std::move(renders)}});
  }
  doc["scenes"] = std::move(scenes);
  if (!manifest.embeddings_path.empty()) doc["embeddings"] = manifest.embeddings_path;
  return doc.dump(2) + "\n";
}

Manifest ManifestFromJson(const std::string& text, std::filesystem::path base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0, e.byte);
  }
  Manifest m;
  m.base_dir = std::move(base_dir);
  try {
    m.seed = doc.at("seed").get<std::uint64_t>();
    for (const json& v : doc.at("views")) {
      ViewSpec view;
      view.id = v.at("id").get<std::string>();
      view.seen = v.at("seen").get<bool>();
      view.pose.position = PointFrom(v.at("position"));
      view.pose.look_at = PointFrom(v.at("look_at"));
      view.pose.resolution = v.value("resolution", view.pose.resolution);
      view.pose.field_of_view_deg = v.value("field_of_view_deg", view.pose.field_of_view_deg);
      view.pose.depth_tolerance = v.value("depth_tolerance", view.pose.depth_tolerance);
      view.pose.splat_radius = v.value("splat_radius", view.pose.splat_radius);
      m.views.push_back(std::move(view));
    }
    for (const json& s : doc.at("scenes")) {
      ManifestScene scene;
      scene.scene_id = s.at("scene_id").get<std::string>();
      scene.split = s.at("split").get<std::string>();
      if (scene.split != "train" && scene.split != "val") {
        throw ParseError("manifest: split must be train or val", 0, 0);
      }
      scene.object_count = s.at("object_count").get<std::size_t>();
      scene.stacked_pairs = s.at("stacked_pairs").get<std::size_t>();
      scene.difficulty = s.at("difficulty").get<std::string>();
      scene.full_path = s.at("full").get<std::string>();
      for (const json& r : s.at("renders")) {
        scene.renders.push_back({r.at("view").get<std::string>(), r.at("path").get<std::string>(),
                                 r.at("seen").get<bool>(),
                                 r.at("omitted").get<std::vector<ObjectId>>()});
      }
      m.scenes.push_back(std::move(scene));
    }
    if (doc.contains("embeddings")) m.embeddings_path = doc.at("embeddings").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0, 0);
  }
  return m;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  return ManifestFromJson(ReadFile(path), path.parent_path());
}

}  // namespace stackrel
