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

#ifndef STACKREL_TOOLS_COMMANDS_H_
#define STACKREL_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace stackrel::cli {

// Settings shared by every subcommand.
struct CommonArgs {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  // Effective configuration in INI form, echoed next to every output.
  std::string effective_config;
};

struct GenArgs {
  std::string out;
  int scenes = 10;
  int min_objects = 3;
  int max_objects = 8;
  std::size_t points = 1024;
  double stack_probability = 0.5;
  double val_fraction = 0.2;
  bool transitive = false;
  bool binary = false;
  bool embeddings = false;
  int embed_dim = 16;
  double view_bias = 2.0;
  double embed_noise = 0.05;
};

struct TrainArgs {
  std::string manifest;
  std::string out;
  std::string clouds = "full";
  int epochs = 60;
  double lr = 0.5;
  std::size_t batch = 64;
  std::size_t k = 50;
  std::vector<std::string> features;
  double lambda_vmfml = 10.0;
  double lambda_st = 1.0;
  double lambda_grl = 1.0;
  double lambda_rel = 1.0;
  double kappa = 20.0;
  bool align = false;
};

struct DetectArgs {
  std::string manifest;
  std::string model;
  std::string out;
  std::string clouds = "all";
  std::string split = "val";
};

struct EvalArgs {
  std::string manifest;
  std::string predictions;
  std::string out;
  std::string clouds = "all";
  std::string split = "val";
};

struct FitVmfArgs {
  std::string embeddings;
  std::string out;
  double kappa = 20.0;
  int max_iters = 200;
  double tol = 1e-9;
  std::string concentration_update = "newton";
};

struct CheckLabelsArgs {
  std::string manifest;
  std::string out;
  std::string clouds = "full";
  std::string split = "all";
  std::size_t k = 50;
  double margin = 0.0;
};

// Each command throws stackrel::Error subclasses on failure and returns
// normally on success.
void RunGen(const CommonArgs& common, const GenArgs& args, std::ostream& out);
void RunTrain(const CommonArgs& common, const TrainArgs& args, std::ostream& out,
              std::ostream& err);
void RunDetect(const CommonArgs& common, const DetectArgs& args, std::ostream& out);
void RunEval(const CommonArgs& common, const EvalArgs& args, std::ostream& out);
void RunFitVmf(const CommonArgs& common, const FitVmfArgs& args, std::ostream& out);
void RunCheckLabels(const CommonArgs& common, const CheckLabelsArgs& args, std::ostream& out);

}  // namespace stackrel::cli

#endif  // STACKREL_TOOLS_COMMANDS_H_
