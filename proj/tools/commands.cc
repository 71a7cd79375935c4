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

#include "commands.h"

#include <cstdio>
#include <cmath>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>

#include "stackrel/dataset.h"
#include "stackrel/embedding_io.h"
#include "stackrel/errors.h"
#include "stackrel/eval.h"
#include "stackrel/io_util.h"
#include "stackrel/relnet.h"
#include "stackrel/scene_io.h"
#include "stackrel/vmf.h"

namespace stackrel::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void EchoConfig(const fs::path& dir, const std::string& name, const std::string& text) {
  WriteFileAtomic(dir / (name + ".config.ini"), text);
}

fs::path ParentOrDot(const fs::path& file) {
  return file.has_parent_path() ? file.parent_path() : fs::path(".");
}

struct CloudRef {
  std::string group;  // "full", "seen" or "unseen"
  std::string view;   // "full" or a view id
  std::string path;
};

std::vector<CloudRef> SelectClouds(const ManifestScene& scene, const std::string& clouds) {
  std::vector<CloudRef> out;
  const bool all = clouds == "all";
  if (all || clouds == "full") out.push_back({"full", "full", scene.full_path});
  for (const ManifestRender& r : scene.renders) {
    const std::string group = r.seen ? "seen" : "unseen";
    if (all || clouds == group || clouds == r.view) out.push_back({group, r.view, r.path});
  }
  if (out.empty()) {
    throw ValidationError("clouds", "'" + clouds +
                                        "' is not all, full, seen, unseen or a view id of " +
                                        scene.scene_id);
  }
  return out;
}

std::vector<const ManifestScene*> SelectScenes(const Manifest& manifest,
                                               const std::string& split) {
  if (split != "train" && split != "val" && split != "all") {
    throw ValidationError("split", "must be train, val or all");
  }
  std::vector<const ManifestScene*> out;
  for (const ManifestScene& s : manifest.scenes) {
    if (split == "all" || s.split == split) out.push_back(&s);
  }
  if (out.empty()) throw ValidationError("split", "no scenes in split '" + split + "'");
  return out;
}

std::string JoinWarnings(const std::vector<std::string>& warnings) {
  std::string s;
  for (const std::string& w : warnings) s += "warning: " + w + "\n";
  return s;
}

}  // namespace

void RunGen(const CommonArgs& common, const GenArgs& args, std::ostream& out) {
  DatasetOptions opts;
  opts.num_scenes = args.scenes;
  opts.val_fraction = args.val_fraction;
  opts.scene.seed = common.seed;
  opts.scene.min_objects = args.min_objects;
  opts.scene.max_objects = args.max_objects;
  opts.scene.points_per_object = args.points;
  opts.scene.stack_probability = args.stack_probability;
  opts.scene.transitive_support = args.transitive;
  opts.format = args.binary ? SceneFormat::kBinary : SceneFormat::kText;
  opts.embeddings = args.embeddings;
  opts.embedding.seed = common.seed;
  opts.embedding.dim = args.embed_dim;
  opts.embedding.view_bias_scale = args.view_bias;
  opts.embedding.noise_scale = args.embed_noise;
  opts.jobs = common.jobs;
  ValidateDatasetOptions(opts);
  if (opts.embeddings && (opts.embedding.dim < 2 || !(opts.embedding.view_bias_scale >= 0.0) ||
                          !(opts.embedding.noise_scale >= 0.0))) {
    throw ValidationError("embeddings", "embed-dim >= 2 and non-negative scales required");
  }

  fs::create_directories(args.out);
  const Manifest m = GenerateDataset(opts, args.out);
  EchoConfig(args.out, "gen", common.effective_config);
  std::size_t train = 0;
  std::size_t seen = 0;
  for (const ManifestScene& s : m.scenes) train += s.split == "train";
  for (const ViewSpec& v : m.views) seen += v.seen;
  out << "generated " << m.scenes.size() << " scenes (" << train << " train, "
      << m.scenes.size() - train << " val), " << m.views.size() << " views (" << seen
      << " seen) in " << args.out << "\n";
}

void RunTrain(const CommonArgs& common, const TrainArgs& args, std::ostream& out,
              std::ostream& err) {
  TrainOptions opts;
  for (const std::string& name : args.features) {
    const auto kind = ParseFeatureKind(name);
    if (!kind) throw ValidationError("features", "unknown feature '" + name + "'");
    opts.spec.extras.push_back(*kind);
  }
  opts.k = args.k;
  opts.epochs = args.epochs;
  opts.learning_rate = args.lr;
  opts.batch_size = args.batch;
  opts.seed = common.seed;
  opts.weights.vmfml = args.lambda_vmfml;
  opts.weights.cosine_alignment = args.lambda_st;
  opts.weights.gradient_reversal = args.lambda_grl;
  opts.weights.relation = args.lambda_rel;
  ValidateTrainOptions(opts);
  if (!(args.kappa > 0.0)) throw ValidationError("kappa", "must be positive");

  const Manifest manifest = LoadManifest(args.manifest);
  std::vector<LabeledFeatures> data;
  for (const ManifestScene* s : SelectScenes(manifest, "train")) {
    for (const CloudRef& c : SelectClouds(*s, args.clouds)) {
      const Scene scene = LoadScene(manifest.Resolve(c.path));
      auto pairs = SceneTrainingPairs(scene, opts.spec, opts.k, common.jobs);
      data.insert(data.end(), pairs.begin(), pairs.end());
    }
  }

  std::optional<AlignmentInputs> align;
  if (args.align) {
    if (manifest.embeddings_path.empty()) {
      throw ValidationError("align", "manifest has no embeddings; run gen --embeddings");
    }
    AlignmentInputs in;
    for (Embedding& e : EmbeddingsFromJson(ReadFile(manifest.Resolve(manifest.embeddings_path)))) {
      (e.domain.is_source() ? in.source : in.target).push_back(std::move(e));
    }
    if (in.source.empty() || in.target.empty()) {
      throw ValidationError("align", "embeddings need both source and target domains");
    }
    in.head.raw_weights = Eigen::MatrixXd::Zero(kNumCategories, in.source.front().vector.size());
    for (const Embedding& e : in.source) {
      if (!e.label || *e.label < 0 || *e.label >= kNumCategories) {
        throw ValidationError("align", "source embeddings need category labels");
      }
      in.head.raw_weights.row(*e.label) += e.vector.transpose();
    }
    in.head.concentration = args.kappa;
    Rng rng = MakeRng(common.seed, "discriminator");
    in.discriminator = DomainDiscriminator::Random(static_cast<int>(in.head.dim()), 16, 2, rng);
    align = std::move(in);
  }

  const TrainResult result = Train(data, opts, std::move(align));
  err << JoinWarnings(result.warnings);
  std::size_t correct = 0;
  for (const LabeledFeatures& s : data) correct += PredictPair(result.model, s.features).label == s.label;
  const double accuracy = static_cast<double>(correct) / static_cast<double>(data.size());

  const json metadata = {{"seed", common.seed}, {"config", common.effective_config}};
  const fs::path model_path = args.out;
  fs::create_directories(ParentOrDot(model_path));
  SaveModel(result.model, model_path.string(), metadata.dump());
  json trace = {{"loss_trace", result.loss_trace},
                {"training_accuracy", accuracy},
                {"samples", data.size()},
                {"warnings", result.warnings}};
  fs::path trace_path = model_path;
  trace_path.replace_extension(".trace.json");
  WriteFileAtomic(trace_path, trace.dump(2) + "\n");
  EchoConfig(ParentOrDot(model_path), "train", common.effective_config);

  char line[128];
  std::snprintf(line, sizeof(line), "trained on %zu pairs; final loss %.6f; training accuracy %.4f\n",
                data.size(), result.loss_trace.back(), accuracy);
  out << line;
}

void RunDetect(const CommonArgs& common, const DetectArgs& args, std::ostream& out) {
  const RelClassifier model = LoadModel(args.model);
  const Manifest manifest = LoadManifest(args.manifest);
  const auto scenes = SelectScenes(manifest, args.split);
  std::size_t written = 0;
  std::size_t edges = 0;
  for (const ManifestScene* s : scenes) {
    const std::vector<CloudRef> clouds = SelectClouds(*s, args.clouds);
    fs::create_directories(fs::path(args.out) / s->scene_id);
    for (const CloudRef& c : clouds) {
      const Scene scene = LoadScene(manifest.Resolve(c.path));
      ManipulationGraph graph;
      if (scene.objects.size() < 2) {
        graph.scene_id = scene.scene_id;
        graph.view_id = scene.view_id;
        for (const ObjectCloud& o : scene.objects) graph.nodes.push_back(o.id);
      } else {
        graph = PredictScene(model, scene, common.jobs);
      }
      if (c.view == "full") graph.view_id.reset();
      edges += graph.edges.size();
      WriteFileAtomic(fs::path(args.out) / s->scene_id / (c.view + ".json"), GraphToJson(graph));
      ++written;
    }
  }
  EchoConfig(args.out, "detect", common.effective_config);
  out << "wrote " << written << " graphs with " << edges << " edges to " << args.out << "\n";
}

void RunEval(const CommonArgs& common, const EvalArgs& args, std::ostream& out) {
  const Manifest manifest = LoadManifest(args.manifest);
  std::map<std::string, std::vector<SceneOutcome>> outcomes;
  EvalReport report;
  for (const ManifestScene* s : SelectScenes(manifest, args.split)) {
    for (const CloudRef& c : SelectClouds(*s, args.clouds)) {
      const Scene truth = LoadScene(manifest.Resolve(c.path));
      const fs::path pred_path = fs::path(args.predictions) / s->scene_id / (c.view + ".json");
      if (!fs::exists(pred_path)) {
        throw ValidationError("prediction-missing", "no prediction at " + pred_path.string());
      }
      const ManipulationGraph graph = GraphFromJson(ReadFile(pred_path));
      if (graph.scene_id != truth.scene_id) {
        throw ValidationError("prediction-mismatch",
                              pred_path.string() + " belongs to scene " + graph.scene_id);
      }
      const ClassMetrics m = PairwiseMetrics(GraphToPairLabels(graph, truth.labels), truth.labels);
      SplitReport& split = report.splits[c.group];
      split.metrics += m;
      const Difficulty band = DifficultyOf(s->stacked_pairs);
      split.difficulty[band] += m;
      outcomes[c.group].push_back({ParentEdges(graph), ParentEdges(truth), truth.objects.size()});
    }
  }
  for (auto& [group, list] : outcomes) report.splits[group].scene_accuracy = SceneAccuracy(list);

  fs::create_directories(args.out);
  const std::string text = ReportToText(report);
  WriteFileAtomic(fs::path(args.out) / "report.txt", text);
  WriteFileAtomic(fs::path(args.out) / "report.json", ReportToJson(report));
  EchoConfig(args.out, "eval", common.effective_config);
  out << text;
}

void RunFitVmf(const CommonArgs& common, const FitVmfArgs& args, std::ostream& out) {
  EmOptions em;
  em.max_iters = args.max_iters;
  em.tol = args.tol;
  em.m_step.concentration_update = args.concentration_update == "closed-form"
                                       ? ConcentrationUpdate::kClosedForm
                                       : ConcentrationUpdate::kNewton;
  if (em.max_iters < 0) throw ValidationError("max-iters", "must be >= 0");
  if (!(em.tol >= 0.0)) throw ValidationError("tol", "must be >= 0");
  if (!(args.kappa >= 0.0) || !std::isfinite(args.kappa)) {
    throw ValidationError("kappa", "must be finite and >= 0");
  }

  std::vector<Embedding> source;
  std::vector<Embedding> target;
  for (Embedding& e : EmbeddingsFromJson(ReadFile(args.embeddings))) {
    (e.domain.is_source() ? source : target).push_back(std::move(e));
  }
  if (source.empty() || target.empty()) {
    throw ValidationError("embeddings", "need labeled source and unlabeled target embeddings");
  }
  int classes = 0;
  for (const Embedding& e : source) {
    if (!e.label || *e.label < 0) throw ValidationError("embeddings", "source needs labels");
    classes = std::max(classes, *e.label + 1);
  }
  VmfMixture init;
  const auto d = source.front().vector.size();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(classes, d);
  for (const Embedding& e : source) sums.row(*e.label) += e.vector.transpose();
  for (int j = 0; j < classes; ++j) {
    if (sums.row(j).norm() < 1e-12) {
      throw DegenerateError("source class " + std::to_string(j) + " has no mean direction");
    }
    init.components.push_back({sums.row(j).transpose().normalized(), args.kappa});
    init.weights.push_back(1.0 / classes);
  }

  const EmFitResult fit = FitVmfMixture(target, init, em);
  const json extra = {{"log_likelihood", fit.log_likelihood},
                      {"iterations", fit.iterations},
                      {"converged", fit.converged},
                      {"seed", common.seed}};
  const fs::path path = args.out;
  fs::create_directories(ParentOrDot(path));
  WriteFileAtomic(path, MixtureToJson(fit.mixture, extra.dump()));
  EchoConfig(ParentOrDot(path), "fit-vmf", common.effective_config);
  char line[160];
  std::snprintf(line, sizeof(line),
                "fitted %zu components to %zu target embeddings in %d iterations; "
                "log-likelihood %.6f\n",
                fit.mixture.size(), target.size(), fit.iterations, fit.log_likelihood.back());
  out << line;
}

void RunCheckLabels(const CommonArgs& common, const CheckLabelsArgs& args, std::ostream& out) {
  if (args.k == 0) throw ValidationError("k-positive", "k must be at least 1");
  if (!(args.margin >= 0.0) || !std::isfinite(args.margin)) {
    throw ValidationError("margin", "must be finite and >= 0");
  }
  const Manifest manifest = LoadManifest(args.manifest);
  json flags = json::array();
  std::size_t scenes_checked = 0;
  for (const ManifestScene* s : SelectScenes(manifest, args.split)) {
    for (const CloudRef& c : SelectClouds(*s, args.clouds)) {
      const Scene scene = LoadScene(manifest.Resolve(c.path));
      ++scenes_checked;
      for (const AuditFlag& f : AuditLabels(scene, args.k, args.margin)) {
        char line[192];
        std::snprintf(line, sizeof(line), "%s %s (%lld, %lld) %s z_op1=%.6f\n",
                      s->scene_id.c_str(), c.view.c_str(), static_cast<long long>(f.a),
                      static_cast<long long>(f.b), std::string(ToString(f.label)).c_str(),
                      f.z_op1);
        out << line;
        flags.push_back({{"scene_id", s->scene_id},
                         {"view", c.view},
                         {"pair", {f.a, f.b}},
                         {"label", std::string(ToString(f.label))},
                         {"z_op1", f.z_op1}});
      }
    }
  }
  out << flags.size() << " flagged pairs in " << scenes_checked << " clouds\n";
  if (!args.out.empty()) {
    const fs::path path = args.out;
    fs::create_directories(ParentOrDot(path));
    WriteFileAtomic(path, json{{"margin", args.margin}, {"k", args.k}, {"flags", flags}}.dump(2) +
                              "\n");
    EchoConfig(ParentOrDot(path), "check-labels", common.effective_config);
  }
}

}  // namespace stackrel::cli
