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

#include "stackrel/scene_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <nlohmann/json.hpp>
#include <string>

#include "stackrel/errors.h"
#include "stackrel/io_util.h"

namespace stackrel {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "binary scene codec assumes a little-endian host");

std::pair<std::size_t, std::size_t> LineAndColumn(std::string_view text,
                                                  std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void SchemaError(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what, 0, 0);
}

double ReadNumber(const json& j, const std::string& where) {
  if (!j.is_number()) SchemaError(where, "expected a number");
  return j.get<double>();
}

Point3 ReadPoint(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) SchemaError(where, "expected [x, y, z]");
  return {ReadNumber(j[0], where + "[0]"), ReadNumber(j[1], where + "[1]"),
          ReadNumber(j[2], where + "[2]")};
}

ObjectId ReadId(const json& j, const std::string& where) {
  if (!j.is_number_integer()) SchemaError(where, "expected an integer id");
  return j.get<ObjectId>();
}

json PointToJson(const Point3& p) { return json::array({p.x, p.y, p.z}); }

}  // namespace

std::string SceneToText(const Scene& input) {
  Scene scene = input;
  Canonicalize(scene);
  json doc = json::object();
  doc["scene_id"] = scene.scene_id;
  json objects = json::array();
  for (const ObjectCloud& o : scene.objects) {
    json obj = json::object();
    obj["id"] = o.id;
    if (o.category) obj["category"] = *o.category;
    json points = json::array();
    for (const Point3& p : o.points) points.push_back(PointToJson(p));
    obj["points"] = std::move(points);
    objects.push_back(std::move(obj));
  }
  doc["objects"] = std::move(objects);
  json labels = json::array();
  for (const auto& [pair, label] : scene.labels) {
    labels.push_back(json::array({pair.first, pair.second, std::string(ToString(label))}));
  }
  doc["labels"] = std::move(labels);
  if (scene.view_id || scene.camera_pose) {
    json view = json::object();
    if (scene.view_id) view["id"] = *scene.view_id;
    if (scene.camera_pose) {
      view["position"] = PointToJson(scene.camera_pose->position);
      const Quaternion& q = scene.camera_pose->orientation;
      view["quaternion"] = json::array({q.w, q.x, q.y, q.z});
    }
    doc["view"] = std::move(view);
  }
  return doc.dump() + "\n";
}

Scene SceneFromText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = LineAndColumn(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(e.what(), line, column);
  }
  if (!doc.is_object()) SchemaError("document", "expected an object");

  Scene scene;
  if (!doc.contains("scene_id") || !doc["scene_id"].is_string()) {
    SchemaError("scene_id", "missing or not a string");
  }
  scene.scene_id = doc["scene_id"].get<std::string>();

  if (!doc.contains("objects") || !doc["objects"].is_array()) {
    SchemaError("objects", "missing or not an array");
  }
  const json& objects = doc["objects"];
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string where = "objects[" + std::to_string(i) + "]";
    const json& obj = objects[i];
    if (!obj.is_object()) SchemaError(where, "expected an object");
    ObjectCloud cloud;
    if (!obj.contains("id")) SchemaError(where + ".id", "missing");
    cloud.id = ReadId(obj["id"], where + ".id");
    if (obj.contains("category")) {
      if (!obj["category"].is_string()) SchemaError(where + ".category", "expected a string");
      cloud.category = obj["category"].get<std::string>();
    }
    if (!obj.contains("points") || !obj["points"].is_array()) {
      SchemaError(where + ".points", "missing or not an array");
    }
    const json& points = obj["points"];
    cloud.points.reserve(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      cloud.points.push_back(
          ReadPoint(points[p], where + ".points[" + std::to_string(p) + "]"));
    }
    scene.objects.push_back(std::move(cloud));
  }

  if (doc.contains("labels")) {
    const json& labels = doc["labels"];
    if (!labels.is_array()) SchemaError("labels", "expected an array");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::string where = "labels[" + std::to_string(i) + "]";
      const json& l = labels[i];
      if (!l.is_array() || l.size() != 3 || !l[2].is_string()) {
        SchemaError(where, "expected [a, b, relation]");
      }
      const ObjectId a = ReadId(l[0], where + "[0]");
      const ObjectId b = ReadId(l[1], where + "[1]");
      const auto rel = ParseRelationClass(l[2].get<std::string>());
      if (!rel) SchemaError(where + "[2]", "unknown relation '" + l[2].get<std::string>() + "'");
      if (!scene.labels.emplace(OrderedPair{a, b}, *rel).second) {
        throw ValidationError("duplicate-label", where + " repeats an ordered pair");
      }
    }
  }

  if (doc.contains("view")) {
    const json& view = doc["view"];
    if (!view.is_object()) SchemaError("view", "expected an object");
    if (view.contains("id")) {
      if (!view["id"].is_string()) SchemaError("view.id", "expected a string");
      scene.view_id = view["id"].get<std::string>();
    }
    if (view.contains("position") != view.contains("quaternion")) {
      SchemaError("view", "position and quaternion must appear together");
    }
    if (view.contains("position")) {
      Pose pose;
      pose.position = ReadPoint(view["position"], "view.position");
      const json& q = view["quaternion"];
      if (!q.is_array() || q.size() != 4) SchemaError("view.quaternion", "expected [w, x, y, z]");
      pose.orientation = {ReadNumber(q[0], "view.quaternion[0]"),
                          ReadNumber(q[1], "view.quaternion[1]"),
                          ReadNumber(q[2], "view.quaternion[2]"),
                          ReadNumber(q[3], "view.quaternion[3]")};
      scene.camera_pose = pose;
    }
  }

  ValidateScene(scene);
  return scene;
}

namespace {

class BinaryWriter {
 public:
  void Bytes(const void* data, std::size_t n) {
    out_.append(static_cast<const char*>(data), n);
  }
  void U8(std::uint8_t v) { Bytes(&v, 1); }
  void U64(std::uint64_t v) { Bytes(&v, 8); }
  void I64(std::int64_t v) { Bytes(&v, 8); }
  void F64(double v) { Bytes(&v, 8); }
  void Str(const std::string& s) {
    U64(s.size());
    Bytes(s.data(), s.size());
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::string_view in) : in_(in) {}

  void Bytes(void* data, std::size_t n) {
    if (n > in_.size() - pos_) Fail("truncated input");
    std::memcpy(data, in_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t U8() {
    std::uint8_t v;
    Bytes(&v, 1);
    return v;
  }
  std::uint64_t U64() {
    std::uint64_t v;
    Bytes(&v, 8);
    return v;
  }
  std::int64_t I64() {
    std::int64_t v;
    Bytes(&v, 8);
    return v;
  }
  double F64() {
    double v;
    Bytes(&v, 8);
    return v;
  }
  std::string Str() {
    const std::uint64_t n = U64();
    if (n > in_.size() - pos_) Fail("string length exceeds input");
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  // Guards reserve() against corrupt counts.
  std::uint64_t Count(std::size_t min_element_bytes) {
    const std::uint64_t n = U64();
    if (min_element_bytes > 0 && n > (in_.size() - pos_) / min_element_bytes) {
      Fail("element count exceeds input");
    }
    return n;
  }
  bool AtEnd() const { return pos_ == in_.size(); }
  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError("binary scene at byte " + std::to_string(pos_) + ": " + what, 0, pos_);
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SceneToBinary(const Scene& input) {
  Scene scene = input;
  Canonicalize(scene);
  BinaryWriter w;
  w.Bytes(kBinaryMagic.data(), kBinaryMagic.size());
  w.Str(scene.scene_id);
  const std::uint8_t flags = (scene.view_id ? 1 : 0) | (scene.camera_pose ? 2 : 0);
  w.U8(flags);
  if (scene.view_id) w.Str(*scene.view_id);
  if (scene.camera_pose) {
    const Pose& p = *scene.camera_pose;
    w.F64(p.position.x);
    w.F64(p.position.y);
    w.F64(p.position.z);
    w.F64(p.orientation.w);
    w.F64(p.orientation.x);
    w.F64(p.orientation.y);
    w.F64(p.orientation.z);
  }
  w.U64(scene.objects.size());
  for (const ObjectCloud& o : scene.objects) {
    w.I64(o.id);
    w.U8(o.category ? 1 : 0);
    if (o.category) w.Str(*o.category);
    w.U64(o.points.size());
    for (const Point3& p : o.points) {
      w.F64(p.x);
      w.F64(p.y);
      w.F64(p.z);
    }
  }
  w.U64(scene.labels.size());
  for (const auto& [pair, label] : scene.labels) {
    w.I64(pair.first);
    w.I64(pair.second);
    w.U8(static_cast<std::uint8_t>(label));
  }
  return w.Take();
}

Scene SceneFromBinary(std::string_view bytes) {
  if (bytes.substr(0, kBinaryMagic.size()) != kBinaryMagic) {
    throw ParseError("binary scene: missing STKR1 magic", 0, 0);
  }
  BinaryReader r(bytes.substr(kBinaryMagic.size()));
  Scene scene;
  scene.scene_id = r.Str();
  const std::uint8_t flags = r.U8();
  if (flags & ~3u) r.Fail("unknown view flags");
  if (flags & 1) scene.view_id = r.Str();
  if (flags & 2) {
    Pose p;
    p.position.x = r.F64();
    p.position.y = r.F64();
    p.position.z = r.F64();
    p.orientation.w = r.F64();
    p.orientation.x = r.F64();
    p.orientation.y = r.F64();
    p.orientation.z = r.F64();
    scene.camera_pose = p;
  }
  const std::uint64_t n_objects = r.Count(17);
  scene.objects.reserve(n_objects);
  for (std::uint64_t i = 0; i < n_objects; ++i) {
    ObjectCloud o;
    o.id = r.I64();
    const std::uint8_t has_category = r.U8();
    if (has_category > 1) r.Fail("bad category flag");
    if (has_category) o.category = r.Str();
    const std::uint64_t n_points = r.Count(24);
    o.points.resize(n_points);
    for (Point3& p : o.points) {
      p.x = r.F64();
      p.y = r.F64();
      p.z = r.F64();
    }
    scene.objects.push_back(std::move(o));
  }
  const std::uint64_t n_labels = r.Count(17);
  for (std::uint64_t i = 0; i < n_labels; ++i) {
    const ObjectId a = r.I64();
    const ObjectId b = r.I64();
    const std::uint8_t c = r.U8();
    if (c > 2) r.Fail("bad relation code");
    if (!scene.labels.emplace(OrderedPair{a, b}, static_cast<RelationClass>(c)).second) {
      throw ValidationError("duplicate-label", "ordered pair repeated in binary scene");
    }
  }
  if (!r.AtEnd()) r.Fail("trailing bytes");
  ValidateScene(scene);
  return scene;
}

Scene LoadScene(const std::filesystem::path& path) {
  const std::string bytes = ReadFile(path);
  if (std::string_view(bytes).substr(0, kBinaryMagic.size()) == kBinaryMagic) {
    return SceneFromBinary(bytes);
  }
  return SceneFromText(bytes);
}

void SaveScene(const Scene& scene, const std::filesystem::path& path,
               SceneFormat format) {
  ValidateScene(scene);
  WriteFileAtomic(path, format == SceneFormat::kText ? SceneToText(scene)
                                                     : SceneToBinary(scene));
}

}  // namespace stackrel
