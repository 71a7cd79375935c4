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

#ifndef STACKREL_EMBEDDING_IO_H_
#define STACKREL_EMBEDDING_IO_H_

#include <string>
#include <vector>

#include "stackrel/vmf.h"

namespace stackrel {

// {"dim": d, "embeddings": [{"vector": [...], "domain": "source:0" | "target",
//  "label": j}]}
std::string EmbeddingsToJson(const std::vector<Embedding>& embeddings);
std::vector<Embedding> EmbeddingsFromJson(const std::string& text);

// {"d": d, "K": K, "weights": [...], "components": [{"mu": [...], "kappa": k}]},
// plus the members of `extra_json` at the top level.
std::string MixtureToJson(const VmfMixture& mixture, const std::string& extra_json = "{}");
VmfMixture MixtureFromJson(const std::string& text);

}  // namespace stackrel

#endif  // STACKREL_EMBEDDING_IO_H_
