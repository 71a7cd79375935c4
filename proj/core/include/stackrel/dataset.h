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

#ifndef STACKREL_DATASET_H_
#define STACKREL_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stackrel/scene_io.h"
#include "stackrel/scenesim.h"

namespace stackrel {

struct ManifestRender {
  std::string view;
  std::string path;  // relative to the manifest directory
  bool seen = false;
  std::vector<ObjectId> omitted;
};

struct ManifestScene {
  std::string scene_id;
  std::string split;  // "train" or "val"
  std::size_t object_count = 0;
  std::size_t stacked_pairs = 0;
  std::string difficulty;
  std::string full_path;
  std::vector<ManifestRender> renders;
};

struct Manifest {
  std::uint64_t seed = 0;
  std::vector<ViewSpec> views;
  std::vector<ManifestScene> scenes;
  std::string embeddings_path;  // empty when no embeddings were generated
  // Directory the relative paths resolve against; not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path Resolve(const std::string& relative) const {
    return base_dir / relative;
  }
};

struct DatasetOptions {
  SceneConfig scene;
  int num_scenes = 10;
  // The last round(num_scenes * val_fraction) scenes form the val split.
  double val_fraction = 0.2;
  SceneFormat format = SceneFormat::kText;
  std::vector<ViewSpec> views = NineViewRing();
  bool embeddings = false;
  EmbeddingOptions embedding;
  std::size_t jobs = 1;
};

void ValidateDatasetOptions(const DatasetOptions& options);

// Writes scenes/<id>/full and scenes/<id>/<view> scene files, optionally
// embeddings.json (seen views as source domains, unseen as target), and
// manifest.json under `out_dir`.
Manifest GenerateDataset(const DatasetOptions& options, const std::filesystem::path& out_dir);

std::string ManifestToJson(const Manifest& manifest);
Manifest ManifestFromJson(const std::string& text, std::filesystem::path base_dir = {});
Manifest LoadManifest(const std::filesystem::path& path);

}  // namespace stackrel

#endif  // STACKREL_DATASET_H_
