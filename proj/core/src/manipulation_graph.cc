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
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "stackrel/errors.h"
#include "stackrel/relnet.h"

namespace stackrel {

namespace {

bool EdgeLess(const GraphEdge& x, const GraphEdge& y) {
  return std::tie(x.parent, x.child) < std::tie(y.parent, y.child);
}

// Returns the edge indices of one directed cycle, or an empty vector.
std::vector<std::size_t> FindCycle(std::span<const GraphEdge> edges) {
  std::map<ObjectId, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].parent].push_back(i);
  std::map<ObjectId, int> state;  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::size_t> stack;
  std::vector<std::size_t> cycle;

  std::function<bool(ObjectId)> visit = [&](ObjectId node) {
    state[node] = 1;
    for (std::size_t e : out[node]) {
      const ObjectId next = edges[e].child;
      stack.push_back(e);
      if (state[next] == 1) {
        auto it = std::find_if(stack.begin(), stack.end(),
                               [&](std::size_t s) { return edges[s].parent == next; });
        cycle.assign(it, stack.end());
        return true;
      }
      if (state[next] == 0 && visit(next)) return true;
      stack.pop_back();
    }
    state[node] = 2;
    return false;
  };
  for (const auto& [node, unused] : out) {
    if (state[node] == 0 && visit(node)) return cycle;
  }
  return {};
}

}  // namespace

bool IsAcyclic(std::span<const GraphEdge> edges) { return FindCycle(edges).empty(); }

void RemoveCycles(std::vector<GraphEdge>& edges) {
  for (;;) {
    const std::vector<std::size_t> cycle = FindCycle(edges);
    if (cycle.empty()) return;
    std::size_t worst = cycle.front();
    for (std::size_t e : cycle) {
      const GraphEdge& c = edges[e];
      const GraphEdge& w = edges[worst];
      if (c.confidence < w.confidence || (c.confidence == w.confidence && EdgeLess(c, w))) {
        worst = e;
      }
    }
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(worst));
  }
}

ManipulationGraph BuildManipulationGraph(std::string scene_id, std::vector<ObjectId> nodes,
                                         std::span<const PairVotes> votes) {
  ManipulationGraph g;
  g.scene_id = std::move(scene_id);
  std::sort(nodes.begin(), nodes.end());
  g.nodes = std::move(nodes);
  std::set<std::pair<ObjectId, ObjectId>> seen;
  for (const PairVotes& v : votes) {
    const auto key = std::minmax(v.a, v.b);
    if (v.a == v.b || !seen.insert(key).second) {
      throw ValidationError("pair-votes", "each unordered pair must be voted exactly once");
    }
    if (v.degenerate) {
      g.degenerate_pairs.push_back({v.a, v.b});
      g.degenerate_pairs.push_back({v.b, v.a});
      continue;
    }
    // Express both votes in the (a, b) orientation.
    const RelationClass fwd = v.forward.label;
    const RelationClass bwd = Reversed(v.backward.label);
    RelationClass label;
    double confidence;
    if (fwd == bwd) {
      label = fwd;
      confidence = 0.5 * (v.forward.confidence() + v.backward.confidence());
    } else if (v.forward.confidence() >= v.backward.confidence()) {
      label = fwd;
      confidence = v.forward.confidence();
    } else {
      label = bwd;
      confidence = v.backward.confidence();
    }
    confidence = std::clamp(confidence, 0.0, 1.0);
    if (label == RelationClass::kParent) {
      g.edges.push_back({v.a, v.b, confidence});
    } else if (label == RelationClass::kChild) {
      g.edges.push_back({v.b, v.a, confidence});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), EdgeLess);
  RemoveCycles(g.edges);
  std::sort(g.degenerate_pairs.begin(), g.degenerate_pairs.end());
  return g;
}

ManipulationGraph PredictScene(const RelClassifier& model, const Scene& scene,
                               std::size_t jobs) {
  ValidateClassifier(model);
  if (scene.objects.size() < 2) {
    throw ValidationError("scene-size", "scene prediction needs at least two objects");
  }
  KmvnOptions opts;
  opts.k = model.k;
  const std::vector<OrderedPairFeatures> feats = AllPairFeatures(scene, opts, jobs);
  std::map<OrderedPair, const OrderedPairFeatures*> index;
  for (const OrderedPairFeatures& f : feats) index[{f.a, f.b}] = &f;

  std::vector<ObjectId> nodes;
  for (const ObjectCloud& o : scene.objects) nodes.push_back(o.id);
  std::vector<PairVotes> votes;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j) {
      const ObjectCloud& a = scene.objects[i];
      const ObjectCloud& b = scene.objects[j];
      const OrderedPairFeatures* ab = index.at({a.id, b.id});
      const OrderedPairFeatures* ba = index.at({b.id, a.id});
      PairVotes v;
      v.a = a.id;
      v.b = b.id;
      if (ab->degenerate || ba->degenerate) {
        v.degenerate = true;
      } else {
        v.forward = PredictPair(model, AssembleFeatures(ab->kmvn, a, b, model.spec));
        v.backward = PredictPair(model, AssembleFeatures(ba->kmvn, b, a, model.spec));
      }
      votes.push_back(v);
    }
  }
  ManipulationGraph g = BuildManipulationGraph(scene.scene_id, std::move(nodes), votes);
  g.view_id = scene.view_id;
  return g;
}

}  // namespace stackrel
