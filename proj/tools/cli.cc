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

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <memory>

#include "commands.h"
#include "stackrel/errors.h"

namespace stackrel::cli {

namespace {

std::string OptionValue(const CLI::Option& opt) {
  if (opt.get_type_size() == 0) return opt.count() > 0 ? "true" : "false";
  if (opt.count() == 0) return opt.get_default_str();
  std::string value;
  const auto& results = opt.results();
  for (std::size_t i = 0; i < results.size(); ++i) {
    value += (i ? "," : "") + results[i];
  }
  return value;
}

std::string EffectiveConfig(const CLI::App& app, const CLI::App& sub) {
  std::string text = "# effective configuration\n";
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_configurable() && !opt->get_lnames().empty() &&
        opt->get_lnames().front() != "config" && opt->get_lnames().front() != "help") {
      text += opt->get_lnames().front() + "=" + OptionValue(*opt) + "\n";
    }
  }
  text += "[" + sub.get_name() + "]\n";
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    text += opt->get_lnames().front() + "=" + OptionValue(*opt) + "\n";
  }
  return text;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stacked-object manipulation relationship toolkit", "stackrel"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file; [section] per subcommand, flags override it");

  CommonArgs common;
  app.add_option("--seed", common.seed, "Root 64-bit seed")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads (0 = all cores)")->capture_default_str();

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate scenes, renders and a manifest");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--scenes", gen.scenes, "Number of scenes")->capture_default_str();
  gen_cmd->add_option("--min-objects", gen.min_objects)->capture_default_str();
  gen_cmd->add_option("--max-objects", gen.max_objects)->capture_default_str();
  gen_cmd->add_option("--points", gen.points, "Surface points per object")
      ->capture_default_str();
  gen_cmd->add_option("--stack-probability", gen.stack_probability)->capture_default_str();
  gen_cmd->add_option("--val-fraction", gen.val_fraction)->capture_default_str();
  gen_cmd->add_flag("--transitive", gen.transitive, "Label ancestor pairs as stacked");
  gen_cmd->add_flag("--binary", gen.binary, "Write STKR1 binary scene files");
  gen_cmd->add_flag("--embeddings", gen.embeddings, "Also write per-view embeddings");
  gen_cmd->add_option("--embed-dim", gen.embed_dim)->capture_default_str();
  gen_cmd->add_option("--view-bias", gen.view_bias, "Per-view embedding bias norm")
      ->capture_default_str();
  gen_cmd->add_option("--embed-noise", gen.embed_noise)->capture_default_str();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the relation classifier");
  train_cmd->add_option("--manifest", train.manifest)->required();
  train_cmd->add_option("--out", train.out, "Model file")->required();
  train_cmd->add_option("--clouds", train.clouds, "full, seen, unseen or a view id")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train.lr)->capture_default_str();
  train_cmd->add_option("--batch", train.batch)->capture_default_str();
  train_cmd->add_option("--k", train.k, "KMVN pair count")->capture_default_str();
  train_cmd->add_option("--features", train.features,
                        "Extra features: centroid_z_gap, footprint_overlap")
      ->delimiter(',');
  train_cmd->add_option("--lambda-vmfml", train.lambda_vmfml)->capture_default_str();
  train_cmd->add_option("--lambda-st", train.lambda_st)->capture_default_str();
  train_cmd->add_option("--lambda-grl", train.lambda_grl)->capture_default_str();
  train_cmd->add_option("--lambda-rel", train.lambda_rel)->capture_default_str();
  train_cmd->add_option("--kappa", train.kappa, "VMFML concentration")->capture_default_str();
  train_cmd->add_flag("--align", train.align,
                      "Add the embedding alignment terms (needs gen --embeddings)");

  DetectArgs detect;
  CLI::App* detect_cmd = app.add_subcommand("detect", "Predict manipulation graphs");
  detect_cmd->add_option("--manifest", detect.manifest)->required();
  detect_cmd->add_option("--model", detect.model)->required();
  detect_cmd->add_option("--out", detect.out, "Output directory")->required();
  detect_cmd->add_option("--clouds", detect.clouds, "all, full, seen, unseen or a view id")
      ->capture_default_str();
  detect_cmd->add_option("--split", detect.split, "train, val or all")->capture_default_str();

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  eval_cmd->add_option("--manifest", eval.manifest)->required();
  eval_cmd->add_option("--predictions", eval.predictions, "detect output directory")
      ->required();
  eval_cmd->add_option("--out", eval.out, "Report directory")->required();
  eval_cmd->add_option("--clouds", eval.clouds)->capture_default_str();
  eval_cmd->add_option("--split", eval.split)->capture_default_str();

  FitVmfArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit-vmf", "Fit a target VMF mixture by EM");
  fit_cmd->add_option("--embeddings", fit.embeddings)->required();
  fit_cmd->add_option("--out", fit.out, "Mixture file")->required();
  fit_cmd->add_option("--kappa", fit.kappa, "Initial concentration")->capture_default_str();
  fit_cmd->add_option("--max-iters", fit.max_iters)->capture_default_str();
  fit_cmd->add_option("--tol", fit.tol)->capture_default_str();
  fit_cmd->add_option("--concentration-update", fit.concentration_update)
      ->check(CLI::IsMember({"newton", "closed-form"}))
      ->capture_default_str();

  CheckLabelsArgs check;
  CLI::App* check_cmd = app.add_subcommand("check-labels", "Audit Parent/Child labels");
  check_cmd->add_option("--manifest", check.manifest)->required();
  check_cmd->add_option("--out", check.out, "Optional JSON report path");
  check_cmd->add_option("--clouds", check.clouds)->capture_default_str();
  check_cmd->add_option("--split", check.split)->capture_default_str();
  check_cmd->add_option("--k", check.k)->capture_default_str();
  check_cmd->add_option("--margin", check.margin)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    common.effective_config = EffectiveConfig(app, *sub);
    if (sub == gen_cmd) {
      RunGen(common, gen, out);
    } else if (sub == train_cmd) {
      RunTrain(common, train, out, err);
    } else if (sub == detect_cmd) {
      RunDetect(common, detect, out);
    } else if (sub == eval_cmd) {
      RunEval(common, eval, out);
    } else if (sub == fit_cmd) {
      RunFitVmf(common, fit, out);
    } else {
      RunCheckLabels(common, check, out);
    }
  } catch (const ComponentCollapseError& e) {
    err << "error: " << e.what() << " (component " << e.component() << ")\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace stackrel::cli
