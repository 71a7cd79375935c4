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

#include "stackrel/embedding_io.h"

#include <nlohmann/json.hpp>

#include "stackrel/errors.h"

namespace stackrel {

namespace {

using nlohmann::json;

json Parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), 0, e.byte);
  }
}

json VectorToJson(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd VectorFromJson(const json& a) {
  const auto values = a.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

std::string DomainToString(const DomainTag& d) {
  return d.is_source() ? "source:" + std::to_string(d.index) : "target";
}

DomainTag DomainFromString(const std::string& s) {
  if (s == "target") return DomainTag::Target();
  if (s.rfind("source:", 0) == 0) {
    try {
      return DomainTag::Source(std::stoi(s.substr(7)));
    } catch (const std::exception&) {
    }
  }
  throw ParseError("embeddings: bad domain tag '" + s + "'", 0, 0);
}

}  // namespace

std::string EmbeddingsToJson(const std::vector<Embedding>& embeddings) {
  json doc = json::object();
  doc["dim"] = embeddings.empty() ? 0 : embeddings.front().vector.size();
  json list = json::array();
  for (const Embedding& e : embeddings) {
    json item = {{"vector", VectorToJson(e.vector)}, {"domain", DomainToString(e.domain)}};
    if (e.label) item["label"] = *e.label;
    list.push_back(std::move(item));
  }
  doc["embeddings"] = std::move(list);
  return doc.dump() + "\n";
}

std::vector<Embedding> EmbeddingsFromJson(const std::string& text) {
  const json doc = Parse(text, "embeddings");
  std::vector<Embedding> out;
  try {
    const auto dim = doc.at("dim").get<Eigen::Index>();
    for (const json& item : doc.at("embeddings")) {
      std::optional<int> label;
      if (item.contains("label")) label = item.at("label").get<int>();
      const Eigen::VectorXd v = VectorFromJson(item.at("vector"));
      if (v.size() != dim) throw ParseError("embeddings: vector length differs from dim", 0, 0);
      out.push_back(
          MakeEmbedding(v, DomainFromString(item.at("domain").get<std::string>()), label));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("embeddings: ") + e.what(), 0, 0);
  }
  return out;
}

std::string MixtureToJson(const VmfMixture& mixture, const std::string& extra_json) {
  json doc = Parse(extra_json, "mixture extras");
  json comps = json::array();
  for (const VmfParams& p : mixture.components) {
    comps.push_back({{"mu", VectorToJson(p.mean_direction)}, {"kappa", p.concentration}});
  }
  doc["d"] = mixture.dim();
  doc["K"] = mixture.size();
  doc["components"] = std::move(comps);
  doc["weights"] = mixture.weights;
  return doc.dump(2) + "\n";
}

VmfMixture MixtureFromJson(const std::string& text) {
  const json doc = Parse(text, "mixture");
  VmfMixture mix;
  try {
    for (const json& c : doc.at("components")) {
      mix.components.push_back(
          {VectorFromJson(c.at("mu")), c.at("kappa").get<double>()});
    }
    mix.weights = doc.at("weights").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("mixture: ") + e.what(), 0, 0);
  }
  ValidateMixture(mix);
  return mix;
}

}  // namespace stackrel
