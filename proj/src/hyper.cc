// Copyright 2026 The Cabin NLU Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlu/hyper.h"

#include <string>

#include "nlu/error.h"

namespace nlu {

void Hyper::Validate() const {
  if (hidden_dim == 0) throw ConfigError("hidden_dim must be positive");
  if (attention_dim == 0) throw ConfigError("attention_dim must be positive");
  if (embedding_dim == 0) throw ConfigError("embedding_dim must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ConfigError("dropout must lie in [0, 1)");
  }
  if (!(learning_rate > 0.0))
    throw ConfigError("learning_rate must be positive");
  if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
  if (patience == 0) throw ConfigError("patience must be positive");
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw ConfigError("holdout_fraction must lie in [0, 1)");
  }
}

nlohmann::json Hyper::ToJson() const {
  return {{"seed", seed},
          {"cell", CellKindName(cell)},
          {"hidden_dim", hidden_dim},
          {"attention_dim", attention_dim},
          {"embedding_dim", embedding_dim},
          {"dropout", dropout},
          {"learning_rate", learning_rate},
          {"max_epochs", max_epochs},
          {"patience", patience},
          {"holdout_fraction", holdout_fraction},
          {"trainable_embeddings", trainable_embeddings}};
}

Hyper Hyper::FromJson(const nlohmann::json& j) {
  Hyper h;
  h.seed = j.at("seed").get<uint64_t>();
  h.cell = ParseCellKind(j.at("cell").get<std::string>());
  h.hidden_dim = j.at("hidden_dim").get<size_t>();
  h.attention_dim = j.at("attention_dim").get<size_t>();
  h.embedding_dim = j.at("embedding_dim").get<size_t>();
  h.dropout = j.at("dropout").get<double>();
  h.learning_rate = j.at("learning_rate").get<double>();
  h.max_epochs = j.at("max_epochs").get<size_t>();
  h.patience = j.at("patience").get<size_t>();
  h.holdout_fraction = j.at("holdout_fraction").get<double>();
  h.trainable_embeddings = j.at("trainable_embeddings").get<bool>();
  return h;
}

}  // namespace nlu
