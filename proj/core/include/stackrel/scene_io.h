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

#ifndef STACKREL_SCENE_IO_H_
#define STACKREL_SCENE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "stackrel/pointcloud.h"

namespace stackrel {

// Text scene documents are JSON:
//   {"labels": [[a, b, "Parent"|"Child"|"NoRel"], ...],
//    "objects": [{"category": "...", "id": n, "points": [[x, y, z], ...]}],
//    "scene_id": "...",
//    "view": {"id": "...", "position": [x, y, z], "quaternion": [w, x, y, z]}}
// The canonical form has sorted keys, objects sorted by id, labels sorted by
// pair, shortest round-trip float formatting and a single trailing newline.
//
// The binary variant starts with the magic bytes "STKR1"; all integers and
// floats are little-endian, strings and arrays are u64 length-prefixed:
//   magic | str scene_id | u8 view_flags (bit0 id, bit1 pose)
//   [str view_id] [f64 x3 position, f64 x4 quaternion wxyz]
//   u64 n_objects { i64 id | u8 has_category [str category]
//                   u64 n_points { f64 x, f64 y, f64 z } }
//   u64 n_labels { i64 a | i64 b | u8 class (0 Parent, 1 Child, 2 NoRel) }
enum class SceneFormat { kText, kBinary };

inline constexpr std::string_view kBinaryMagic = "STKR1";

std::string SceneToText(const Scene& scene);
Scene SceneFromText(std::string_view text);

std::string SceneToBinary(const Scene& scene);
Scene SceneFromBinary(std::string_view bytes);

// Detects the format from the magic bytes, parses and validates.
// Throws ParseError or ValidationError.
Scene LoadScene(const std::filesystem::path& path);

// Validates, canonicalizes and writes atomically. Throws ValidationError
// before touching the file system, IoError on write failure.
void SaveScene(const Scene& scene, const std::filesystem::path& path,
               SceneFormat format = SceneFormat::kText);

}  // namespace stackrel

#endif  // STACKREL_SCENE_IO_H_
