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

#include <nlohmann/json.hpp>
#include <string>

#include "stackrel/errors.h"
#include "stackrel/io_util.h"
#include "stackrel/relnet.h"

namespace stackrel {

namespace {

using nlohmann::json;

json ParseDocument(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), 0, e.byte);
  }
}

}  // namespace

std::string ModelToJson(const RelClassifier& model, const std::string& metadata_json) {
  ValidateClassifier(model);
  json doc = json::object();
  json spec = json::array({"z_op1", "z_op2"});
  for (FeatureKind kind : model.spec.extras) spec.push_back(std::string(ToString(kind)));
  doc["feature_spec"] = std::move(spec);
  doc["k"] = model.k;
  json weights = json::array();
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c) row.push_back(model.weights(r, c));
    weights.push_back(std::move(row));
  }
  doc["weights"] = std::move(weights);
  doc["bias"] = json::array({model.bias[0], model.bias[1], model.bias[2]});
  json scale = json::array();
  for (Eigen::Index c = 0; c < model.feature_scale.size(); ++c) {
    scale.push_back(model.feature_scale[c]);
  }
  doc["feature_scale"] = std::move(scale);
  doc["metadata"] = ParseDocument(metadata_json, "model metadata");
  return doc.dump(2) + "\n";
}

RelClassifier ModelFromJson(const std::string& text) {
  const json doc = ParseDocument(text, "model");
  RelClassifier model;
  try {
    const json& spec = doc.at("feature_spec");
    if (!spec.is_array() || spec.size() < 2 || spec[0] != "z_op1" || spec[1] != "z_op2") {
      throw ParseError("model: feature_spec must start with z_op1, z_op2", 0, 0);
    }
    FeatureSpec fs;
    for (std::size_t i = 2; i < spec.size(); ++i) {
      const auto kind = ParseFeatureKind(spec[i].get<std::string>());
      if (!kind) throw ParseError("model: unknown feature " + spec[i].dump(), 0, 0);
      fs.extras.push_back(*kind);
    }
    model = RelClassifier::Zero(fs, doc.at("k").get<std::size_t>());
    const json& w = doc.at("weights");
    if (w.size() != kNumRelationClasses) throw ParseError("model: weights needs 3 rows", 0, 0);
    for (Eigen::Index r = 0; r < kNumRelationClasses; ++r) {
      const json& row = w.at(static_cast<std::size_t>(r));
      if (row.size() != fs.size()) throw ParseError("model: weight row length != F", 0, 0);
      for (Eigen::Index c = 0; c < model.weights.cols(); ++c) {
        model.weights(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      }
    }
    const json& b = doc.at("bias");
    if (b.size() != 3) throw ParseError("model: bias needs 3 entries", 0, 0);
    for (int i = 0; i < 3; ++i) model.bias[i] = b.at(static_cast<std::size_t>(i)).get<double>();
    if (doc.contains("feature_scale")) {
      const json& s = doc.at("feature_scale");
      if (s.size() != fs.size()) throw ParseError("model: feature_scale length != F", 0, 0);
      for (Eigen::Index c = 0; c < model.feature_scale.size(); ++c) {
        model.feature_scale[c] = s.at(static_cast<std::size_t>(c)).get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what(), 0, 0);
  }
  ValidateClassifier(model);
  return model;
}

void SaveModel(const RelClassifier& model, const std::string& path,
               const std::string& metadata_json) {
  WriteFileAtomic(path, ModelToJson(model, metadata_json));
}

RelClassifier LoadModel(const std::string& path) { return ModelFromJson(ReadFile(path)); }

std::string GraphToJson(const ManipulationGraph& graph) {
  json doc = json::object();
  doc["scene_id"] = graph.scene_id;
  if (graph.view_id) doc["view_id"] = *graph.view_id;
  doc["nodes"] = graph.nodes;
  json edges = json::array();
  for (const GraphEdge& e : graph.edges) {
    edges.push_back({{"parent", e.parent}, {"child", e.child}, {"confidence", e.confidence}});
  }
  doc["edges"] = std::move(edges);
  json degenerate = json::array();
  for (const auto& [a, b] : graph.degenerate_pairs) degenerate.push_back(json::array({a, b}));
  doc["degenerate_pairs"] = std::move(degenerate);
  return doc.dump() + "\n";
}

ManipulationGraph GraphFromJson(const std::string& text) {
  const json doc = ParseDocument(text, "graph");
  ManipulationGraph g;
  try {
    g.scene_id = doc.at("scene_id").get<std::string>();
    if (doc.contains("view_id")) g.view_id = doc.at("view_id").get<std::string>();
    if (doc.contains("nodes")) g.nodes = doc.at("nodes").get<std::vector<ObjectId>>();
    for (const json& e : doc.at("edges")) {
      GraphEdge edge{e.at("parent").get<ObjectId>(), e.at("child").get<ObjectId>(),
                     e.at("confidence").get<double>()};
      if (!(edge.confidence >= 0.0 && edge.confidence <= 1.0)) {
        throw ParseError("graph: edge confidence outside [0, 1]", 0, 0);
      }
      g.edges.push_back(edge);
    }
    if (doc.contains("degenerate_pairs")) {
      for (const json& p : doc.at("degenerate_pairs")) {
        g.degenerate_pairs.push_back({p.at(0).get<ObjectId>(), p.at(1).get<ObjectId>()});
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph: ") + e.what(), 0, 0);
  }
  return g;
}

}  // namespace stackrel
