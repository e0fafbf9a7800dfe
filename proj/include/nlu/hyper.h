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

#ifndef NLU_HYPER_H_
#define NLU_HYPER_H_

#include <cstddef>
#include <cstdint>

#include "json.hpp"
#include "nlu/recurrent.h"

namespace nlu {

// Training hyperparameters shared by every model. Defaults are declared
// choices for desk-scale corpora.
struct Hyper {
  uint64_t seed = 1;
  CellKind cell = CellKind::kLstm;
  size_t hidden_dim = 128;  // per direction
  size_t attention_dim = 64;
  size_t embedding_dim = 100;  // used when no vector file is given
  double dropout = 0.2;
  double learning_rate = 1e-3;
  size_t max_epochs = 100;
  size_t patience = 10;
  // Share of the training data held out for early stopping. With 0 the
  // training data itself is monitored.
  double holdout_fraction = 0.1;
  bool trainable_embeddings = true;

  // Throws ConfigError.
  void Validate() const;

  nlohmann::json ToJson() const;
  static Hyper FromJson(const nlohmann::json& j);

  bool operator==(const Hyper&) const = default;
};

}  // namespace nlu

#endif  // NLU_HYPER_H_
