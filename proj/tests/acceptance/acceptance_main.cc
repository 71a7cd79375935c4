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


// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "stackrel/alignment.h"
#include "stackrel/domain_alignment.h"
#include "stackrel/eval.h"
#include "stackrel/kmvn.h"
#include "stackrel/parallel.h"
#include "stackrel/pointcloud.h"
#include "stackrel/relnet.h"
#include "stackrel/rng.h"
#include "stackrel/scenesim.h"
#include "stackrel/vmf.h"
#include "stackrel/vmfml.h"
#include "testing/test_util.h"

namespace stackrel {
namespace {

using testing::Flatten;
using testing::NumericGradient;
using testing::RelativeError;
using testing::Unflatten;

constexpr double kPi = std::numbers::pi;
constexpr double kFdTolerance = 1e-4;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

std::size_t Jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

Eigen::MatrixXd RandomMatrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return g(rng); });
}

Eigen::VectorXd RandomUnit(int dim, Rng& rng) {
  return RandomMatrix(dim, 1, rng).col(0).normalized();
}

double AngleDeg(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180.0 / kPi;
}

bool SameKmvn(const KmvnResult& got, const KmvnResult& want) {
  return got.pairs == want.pairs && got.angles == want.angles &&
         got.distances == want.distances && got.z_op1 == want.z_op1 && got.z_op2 == want.z_op2;
}

Outcome KmvnOracle() {
  Rng rng = MakeRng(1, "acceptance-kmvn");
  std::uniform_int_distribution<int> size(1, 200);
  const std::size_t ks[] = {1, 10, 50};
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = testing::RandomCloud(size(rng), rng, {0.0, 0.0, 0.05 * (trial % 4)});
    const auto b = testing::RandomCloud(size(rng), rng);
    const KmvnOptions opt{.k = ks[trial % 3]};
    if (!SameKmvn(SelectKmvn(a, b, opt), testing::KmvnBySort(a, b, opt))) ++mismatches;
  }
  return {mismatches == 0, Format("%d of 200 pairs differ from the sort oracle", mismatches)};
}

Outcome VmfNormalization() {
  Rng rng = MakeRng(2, "acceptance-mc");
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Eigen::VectorXd> samples(1000000);
  for (auto& s : samples) s = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
  const Eigen::Vector3d mu = Eigen::Vector3d::UnitZ();
  double worst_mc = 0.0;
  for (double kappa : {0.5, 5.0, 50.0}) {
    double sum = 0.0;
    for (const auto& s : samples) sum += std::exp(VmfLogPdf(s, {mu, kappa}));
    worst_mc = std::max(worst_mc, std::abs(4.0 * kPi * sum / samples.size() - 1.0));
  }
  double worst_c3 = 0.0;
  for (double kappa = 0.01; kappa <= 600.0; kappa *= 1.3) {
    const double closed = kappa / (4.0 * kPi * std::sinh(kappa));
    worst_c3 = std::max(worst_c3, std::abs(std::exp(LogVmfNormalizer(3, kappa)) / closed - 1.0));
  }
  return {worst_mc <= 0.02 && worst_c3 <= 1e-10,
          Format("max |integral - 1| = %.4f, max C3 relative error = %.2e", worst_mc, worst_c3)};
}

Outcome ParameterRecovery() {
  Rng rng = MakeRng(3, "acceptance-recovery");
  const Eigen::VectorXd mu = RandomUnit(3, rng);
  const auto data = SampleVmf({mu, 20.0}, 10000, rng);
  const VmfMixture init{{{RandomUnit(3, rng), 1.0}}, {1.0}};
  const VmfParams fit = FitVmfMixture(data, init).mixture.components[0];
  const double angle = AngleDeg(fit.mean_direction, mu);
  const double kappa_err = std::abs(fit.concentration - 20.0) / 20.0;
  return {angle <= 1.0 && kappa_err <= 0.10,
          Format("mean off by %.3f deg, kappa %.3f (%.1f%% error)", angle, fit.concentration,
                 100.0 * kappa_err)};
}

Outcome EmMonotonicity() {
  double worst_drop = 0.0;
  int total_steps = 0;
  for (int run = 0; run < 100; ++run) {
    Rng rng = MakeRng(4, "acceptance-em", run);
    const Eigen::VectorXd a = RandomUnit(3, rng);
    Eigen::VectorXd b = RandomUnit(3, rng);
    b = (b - b.dot(a) * a).normalized();
    std::vector<Embedding> data = SampleVmf({a, 30.0}, 300, rng);
    const auto more = SampleVmf({b, 30.0}, 300, rng);
    data.insert(data.end(), more.begin(), more.end());
    const VmfMixture init{{{RandomUnit(3, rng), 1.0}, {RandomUnit(3, rng), 1.0}}, {0.5, 0.5}};
    const EmFitResult r = FitVmfMixture(data, init);
    for (std::size_t i = 1; i < r.log_likelihood.size(); ++i) {
      worst_drop = std::max(worst_drop, r.log_likelihood[i - 1] - r.log_likelihood[i]);
      ++total_steps;
    }
  }
  return {worst_drop <= 1e-9,
          Format("largest per-step decrease %.2e over %d steps", worst_drop, total_steps)};
}

Outcome GradientChecks() {
  Rng rng = MakeRng(5, "acceptance-fd");
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> cls(0, 2);
  double vmfml = 0.0;
  double st = 0.0;
  double drel = 0.0;
  double disc = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    {
      const int k = 2 + trial % 4;
      const int d = 3 + trial % 6;
      const VmfmlHead head{RandomMatrix(k, d, rng), 1.0 + trial % 20};
      std::vector<Embedding> batch;
      for (int i = 0; i < 10; ++i) {
        batch.push_back(MakeEmbedding(RandomMatrix(d, 1, rng).col(0), DomainTag::Source(0),
                                      i % k));
      }
      auto f = [&](const Eigen::VectorXd& x) {
        return VmfmlLossAndGrad({Unflatten(x, k, d), head.concentration}, batch).loss;
      };
      vmfml = std::max(vmfml, RelativeError(Flatten(VmfmlLossAndGrad(head, batch).grad),
                                            NumericGradient(f, Flatten(head.raw_weights))));
    }
    {
      const int k = 1 + trial % 4;
      const int d = 2 + trial % 5;
      const Eigen::MatrixXd s = RandomMatrix(k, d, rng);
      Eigen::MatrixXd t = RandomMatrix(k, d, rng);
      for (int j = 0; j < k; ++j) {
        if (s.row(j).normalized().dot(t.row(j).normalized()) < -0.9) t.row(j) *= -1.0;
      }
      const CosineAlignment r = CosineAlignmentLoss(s, t);
      auto fs = [&](const Eigen::VectorXd& x) {
        return CosineAlignmentLoss(Unflatten(x, k, d), t).loss;
      };
      auto ft = [&](const Eigen::VectorXd& x) {
        return CosineAlignmentLoss(s, Unflatten(x, k, d)).loss;
      };
      st = std::max({st, RelativeError(Flatten(r.grad_source), NumericGradient(fs, Flatten(s))),
                     RelativeError(Flatten(r.grad_target), NumericGradient(ft, Flatten(t)))});
    }
    {
      const FeatureSpec spec{trial % 2 ? std::vector<FeatureKind>{FeatureKind::kCentroidZGap}
                                       : std::vector<FeatureKind>{}};
      const Eigen::Index f = static_cast<Eigen::Index>(spec.size());
      RelClassifier m = RelClassifier::Zero(spec);
      m.weights = RandomMatrix(3, static_cast<int>(f), rng);
      m.bias = RandomMatrix(3, 1, rng).col(0);
      m.feature_scale = Eigen::VectorXd::NullaryExpr(f, [&] { return 0.5 + std::abs(g(rng)); });
      std::vector<LabeledFeatures> data;
      for (int i = 0; i < 15; ++i) {
        data.push_back({RandomMatrix(static_cast<int>(f), 1, rng).col(0),
                        static_cast<RelationClass>(cls(rng))});
      }
      const DrelLossGrad r = RelationLossAndGrad(m, data);
      auto fw = [&](const Eigen::VectorXd& x) {
        RelClassifier c = m;
        c.weights = Unflatten(x, 3, f);
        return RelationLossAndGrad(c, data).loss;
      };
      auto fb = [&](const Eigen::VectorXd& x) {
        RelClassifier c = m;
        c.bias = x;
        return RelationLossAndGrad(c, data).loss;
      };
      drel = std::max({drel,
                       RelativeError(Flatten(r.grad_weights), NumericGradient(fw, Flatten(m.weights))),
                       RelativeError(r.grad_bias, NumericGradient(fb, m.bias))});
    }
    {
      const int in = 2 + trial % 5;
      const int hidden = 3 + trial % 4;
      const int domains = 2 + trial % 3;
      const int n = 6;
      const DomainDiscriminator dd = DomainDiscriminator::Random(in, hidden, domains, rng);
      const Eigen::MatrixXd x = RandomMatrix(n, in, rng);
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = i % domains;
      const double lambda = 0.25 * (1 + trial % 8);
      const auto grads = dd.Backward(x, labels, lambda);
      auto fx = [&](const Eigen::VectorXd& v) {
        return -lambda * dd.Loss(Unflatten(v, n, in), labels);
      };
      auto with = [&](auto set) {
        return [&, set](const Eigen::VectorXd& v) {
          DomainDiscriminator c = dd;
          set(c, v);
          return c.Loss(x, labels);
        };
      };
      const auto fw1 = with([&](DomainDiscriminator& c, const Eigen::VectorXd& v) {
        c.w1 = Unflatten(v, hidden, in);
      });
      const auto fb1 = with([](DomainDiscriminator& c, const Eigen::VectorXd& v) { c.b1 = v; });
      const auto fw2 = with([&](DomainDiscriminator& c, const Eigen::VectorXd& v) {
        c.w2 = Unflatten(v, domains, hidden);
      });
      const auto fb2 = with([](DomainDiscriminator& c, const Eigen::VectorXd& v) { c.b2 = v; });
      disc = std::max({disc, RelativeError(Flatten(grads.features), NumericGradient(fx, Flatten(x))),
                       RelativeError(Flatten(grads.w1), NumericGradient(fw1, Flatten(dd.w1))),
                       RelativeError(grads.b1, NumericGradient(fb1, dd.b1)),
                       RelativeError(Flatten(grads.w2), NumericGradient(fw2, Flatten(dd.w2))),
                       RelativeError(grads.b2, NumericGradient(fb2, dd.b2))});
    }
  }
  return {std::max({vmfml, st, drel, disc}) <= kFdTolerance,
          Format("max relative error: vmfml %.1e, st %.1e, drel %.1e, discriminator+grl %.1e",
                 vmfml, st, drel, disc)};
}

Outcome FeatureInvariance() {
  SceneConfig config;
  config.points_per_object = 256;
  config.seed = 6;
  Rng rng = MakeRng(6, "acceptance-invariance");
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  double worst = 0.0;
  double worst_swap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Scene scene = GenerateScene(config, static_cast<std::uint64_t>(trial % 10)).scene;
    const Scene moved = RigidTransform(scene, Quaternion::FromAxisAngle({0, 0, 1}, angle(rng)),
                                       {shift(rng), shift(rng), shift(rng)});
    const auto before = AllPairFeatures(scene);
    const auto after = AllPairFeatures(moved);
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (before[i].degenerate || after[i].degenerate) continue;
      worst = std::max({worst, std::abs(before[i].kmvn.z_op1 - after[i].kmvn.z_op1),
                        std::abs(before[i].kmvn.z_op2 - after[i].kmvn.z_op2)});
    }
    const ObjectCloud& a = scene.objects[0];
    const ObjectCloud& b = scene.objects[1];
    const KmvnResult ab = SelectKmvn(a, b);
    const KmvnResult ba = SelectKmvn(b, a);
    worst_swap = std::max({worst_swap, std::abs(ab.z_op1 + ba.z_op1), std::abs(ab.z_op2 - ba.z_op2)});
  }
  return {worst <= 1e-9 && worst_swap <= 1e-9,
          Format("max change under rigid motion %.2e, max swap asymmetry %.2e", worst, worst_swap)};
}

Outcome SignProperty() {
  SceneConfig config;
  config.seed = 7;
  int checked = 0;
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    const SimulatedScene sim = GenerateScene(config, static_cast<std::uint64_t>(i));
    for (const Body& body : sim.bodies) {
      if (!body.supporter || *body.support_clearance < 0.01) continue;
      ++checked;
      if (!(SelectKmvn(*sim.scene.Find(body.id), *sim.scene.Find(*body.supporter)).z_op1 > 0.0)) {
        ++violations;
      }
    }
  }
  return {violations == 0 && checked > 0,
          Format("%d of %d stacked pairs violate z_op1 > 0", violations, checked)};
}

struct DeskScaleMetrics {
  ClassMetrics pairwise;
  SceneAccuracyReport scene_accuracy;
};

// Trains on the first 400 of 500 scenes and evaluates the last 100.
// `view_of` maps a scene index to a seen view, or to nothing for full clouds.
DeskScaleMetrics RunDeskScale(const std::vector<Scene>& scenes,
                              const std::function<std::optional<ViewSpec>(std::size_t)>& view_of) {
  std::vector<Scene> clouds(scenes.size());
  ParallelFor(scenes.size(), Jobs(), [&](std::size_t i) {
    const auto view = view_of(i);
    clouds[i] = view ? RenderView(scenes[i], view->pose, view->id).scene : scenes[i];
  });
  std::vector<std::vector<LabeledFeatures>> per_scene(400);
  ParallelFor(400, Jobs(), [&](std::size_t i) {
    per_scene[i] = SceneTrainingPairs(clouds[i], FeatureSpec{}, kDefaultKmvnK);
  });
  std::vector<LabeledFeatures> train;
  for (const auto& p : per_scene) train.insert(train.end(), p.begin(), p.end());
  TrainOptions options;
  options.seed = 42;
  const RelClassifier model = Train(train, options).model;

  std::vector<ManipulationGraph> graphs(100);
  ParallelFor(100, Jobs(), [&](std::size_t i) { graphs[i] = PredictScene(model, clouds[400 + i]); });
  DeskScaleMetrics out;
  std::vector<SceneOutcome> outcomes;
  for (std::size_t i = 0; i < 100; ++i) {
    const Scene& truth = clouds[400 + i];
    out.pairwise += PairwiseMetrics(GraphToPairLabels(graphs[i], truth.labels), truth.labels);
    outcomes.push_back({ParentEdges(graphs[i]), ParentEdges(truth), truth.objects.size()});
  }
  out.scene_accuracy = SceneAccuracy(outcomes);
  return out;
}

std::vector<Scene> DeskScaleScenes() {
  SceneConfig config;
  config.seed = 42;
  std::vector<Scene> scenes(500);
  ParallelFor(scenes.size(), Jobs(), [&](std::size_t i) {
    scenes[i] = GenerateScene(config, static_cast<std::uint64_t>(i)).scene;
  });
  return scenes;
}

Outcome EndToEnd(const DeskScaleMetrics& m) {
  const double parent = m.pairwise[RelationClass::kParent].recall();
  const double child = m.pairwise[RelationClass::kChild].recall();
  const double norel = m.pairwise[RelationClass::kNoRel].recall();
  const double sa = m.scene_accuracy.overall.ratio();
  return {parent >= 0.85 && child >= 0.85 && norel >= 0.95 && sa >= 0.60,
          Format("recall parent %.3f child %.3f norel %.3f, scene accuracy %.3f", parent, child,
                 norel, sa)};
}

Outcome ViewShift(const DeskScaleMetrics& full, const DeskScaleMetrics& partial) {
  const double a = full.pairwise[RelationClass::kParent].recall();
  const double b = partial.pairwise[RelationClass::kParent].recall();
  return {a - b <= 0.20,
          Format("parent recall full %.3f, single view %.3f, drop %.1f points", a, b,
                 100.0 * (a - b))};
}

Outcome LabelAudit(const std::vector<Scene>& source) {
  std::vector<Scene> scenes(source.begin(), source.begin() + 100);
  std::vector<std::pair<std::size_t, OrderedPair>> stacked;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    for (const auto& [pair, label] : scenes[i].labels) {
      if (label == RelationClass::kParent) stacked.push_back({i, pair});
    }
  }
  Rng rng = MakeRng(10, "acceptance-audit");
  std::shuffle(stacked.begin(), stacked.end(), rng);
  const std::size_t swaps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(0.05 * static_cast<double>(stacked.size()))));
  std::set<std::pair<std::size_t, OrderedPair>> injected;
  for (std::size_t s = 0; s < swaps; ++s) {
    auto [i, pair] = stacked[s];
    const OrderedPair back{pair.second, pair.first};
    scenes[i].labels[pair] = RelationClass::kChild;
    scenes[i].labels[back] = RelationClass::kParent;
    injected.insert({i, std::minmax(pair.first, pair.second)});
  }
  std::vector<std::vector<AuditFlag>> flags(scenes.size());
  ParallelFor(scenes.size(), Jobs(),
              [&](std::size_t i) { flags[i] = AuditLabels(scenes[i], kDefaultKmvnK, 0.2); });
  std::set<std::pair<std::size_t, OrderedPair>> flagged;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    for (const AuditFlag& f : flags[i]) flagged.insert({i, std::minmax(f.a, f.b)});
  }
  std::size_t hits = 0;
  for (const auto& f : flagged) hits += injected.count(f);
  const double precision = flagged.empty() ? 1.0 : static_cast<double>(hits) / flagged.size();
  const double recall = static_cast<double>(hits) / injected.size();
  return {precision >= 0.95 && recall >= 0.80,
          Format("%zu swaps among %zu stacked pairs, %zu flagged, precision %.3f recall %.3f",
                 swaps, stacked.size(), flagged.size(), precision, recall)};
}

Outcome Alignment() {
  SceneConfig config;
  config.points_per_object = 256;
  config.seed = 11;
  const std::vector<ViewSpec> views = NineViewRing();
  EmbeddingOptions options;
  options.view_bias_scale = 2.0;
  options.seed = 11;
  std::vector<Embedding> source;
  std::vector<Embedding> target;
  for (int i = 0; i < 60; ++i) {
    const Scene scene = GenerateScene(config, static_cast<std::uint64_t>(i)).scene;
    const auto s = GenerateEmbeddings(scene, views[0], DomainTag::Source(0), options);
    const auto t = GenerateEmbeddings(scene, views[4], DomainTag::Target(), options);
    source.insert(source.end(), s.begin(), s.end());
    target.insert(target.end(), t.begin(), t.end());
  }
  for (Embedding& e : target) e.label.reset();
  const VmfmlHead head{ClassMeanDirections(source, kNumCategories), kDefaultVmfmlConcentration};
  const AlignResult r = AlignDomains(head, source, target);
  const double reduction = 1.0 - r.final_gap_deg / r.initial_gap_deg;
  const bool decreased = r.cosine_trace.back() < r.cosine_trace.front();
  return {decreased && reduction >= 0.30,
          Format("L_st %.4f -> %.4f, mean gap %.2f -> %.2f deg (%.0f%% reduction)",
                 r.cosine_trace.front(), r.cosine_trace.back(), r.initial_gap_deg,
                 r.final_gap_deg, 100.0 * reduction)};
}

Outcome CentroidFailure() {
  const Scene scene = testing::KeyboardOnMugScene();
  const ViewSpec top = NineViewRing({0.2, 0.0, 0.05}).back();
  const Scene seen = RenderView(scene, top.pose, top.id).scene;
  if (seen.objects.size() != 2) return {false, "an object is hidden in the overhead view"};
  const double gap = CentroidZGap(*seen.Find(1), *seen.Find(2));
  const double z = SelectKmvn(*seen.Find(1), *seen.Find(2)).z_op1;
  return {gap * z < 0.0,
          Format("keyboard minus mug: centroid gap %.4f m, z_op1 %.4f", gap, z)};
}

int Main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  report(1, "kmvn oracle", KmvnOracle());
  report(2, "vmf normalization", VmfNormalization());
  report(3, "parameter recovery", ParameterRecovery());
  report(4, "em monotonicity", EmMonotonicity());
  report(5, "gradients", GradientChecks());
  report(6, "feature invariance", FeatureInvariance());
  report(7, "sign property", SignProperty());

  const std::vector<Scene> scenes = DeskScaleScenes();
  const DeskScaleMetrics full = RunDeskScale(scenes, [](std::size_t) { return std::nullopt; });
  report(8, "desk-scale end to end", EndToEnd(full));
  const std::vector<ViewSpec> ring = NineViewRing();
  std::vector<ViewSpec> seen;
  for (const ViewSpec& v : ring) {
    if (v.seen) seen.push_back(v);
  }
  const DeskScaleMetrics partial = RunDeskScale(
      scenes, [&](std::size_t i) -> std::optional<ViewSpec> { return seen[i % seen.size()]; });
  report(9, "view shift", ViewShift(full, partial));
  report(10, "label audit", LabelAudit(scenes));
  report(11, "alignment", Alignment());
  report(12, "centroid failure", CentroidFailure());
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace stackrel

int main() { return stackrel::Main(); }
