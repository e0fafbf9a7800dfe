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

#ifndef NLU_OPTIMIZER_H_
#define NLU_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlu/tape.h"

namespace nlu {

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First-order optimizer with per-parameter state. Adam moments are created
// lazily (zero-initialized) the first time a parameter is stepped. Row-sparse
// gradients update only the touched rows; moments of untouched rows are left
// as they are (lazy Adam).
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config);

  // Applies one update to every parameter. A parameter absent from `grads`
  // has a zero gradient. Increments step_count() by exactly one.
  void Step(std::span<Parameter* const> params, const GradientMap& grads);

  uint64_t step_count() const { return step_count_; }
  const OptimizerConfig& config() const { return config_; }

 private:
  struct Moments {
    std::vector<double> m;
    std::vector<double> v;
  };

  void Update(Parameter& p, size_t offset, std::span<const double> g,
              Moments* moments);

  OptimizerConfig config_;
  uint64_t step_count_ = 0;
  std::unordered_map<const Parameter*, Moments> moments_;
};

}  // namespace nlu

#endif  // NLU_OPTIMIZER_H_
