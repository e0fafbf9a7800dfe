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

#include "nlu/optimizer.h"

#include <cmath>

#include "nlu/error.h"

namespace nlu {

Optimizer::Optimizer(OptimizerConfig config) : config_(config) {
  if (!(config_.learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  if (config_.kind == OptimizerKind::kAdam &&
      !(config_.beta1 >= 0.0 && config_.beta1 < 1.0 && config_.beta2 >= 0.0 &&
        config_.beta2 < 1.0 && config_.epsilon > 0.0)) {
    throw ConfigError("Adam needs beta1, beta2 in [0, 1) and epsilon > 0");
  }
}

void Optimizer::Step(std::span<Parameter* const> params,
                     const GradientMap& grads) {
  ++step_count_;
  for (Parameter* p : params) {
    auto it = grads.find(p);
    if (it == grads.end()) continue;
    const ParamGrad& g = it->second;
    Moments* moments = nullptr;
    if (config_.kind == OptimizerKind::kAdam) {
      moments = &moments_[p];
      if (moments->m.empty()) {
        moments->m.assign(p->value.size(), 0.0);
        moments->v.assign(p->value.size(), 0.0);
      }
    }
    if (!g.sparse) {
      if (g.dense.size() != p->value.size()) {
        throw ShapeError("gradient for '" + p->name + "' has " +
                         std::to_string(g.dense.size()) +
                         " entries, parameter " +
                         ShapeString(p->value.shape()));
      }
      Update(*p, 0, g.dense, moments);
    } else {
      const size_t width = p->value.cols();
      for (const auto& [row, rg] : g.rows) {
        if (rg.size() != width || row >= p->value.rows()) {
          throw ShapeError("row gradient does not fit parameter '" + p->name +
                           "' " + ShapeString(p->value.shape()));
        }
        Update(*p, row * width, rg, moments);
      }
    }
  }
}

void Optimizer::Update(Parameter& p, size_t offset, std::span<const double> g,
                       Moments* moments) {
  auto w = p.value.mutable_data().subspan(offset, g.size());
  if (config_.kind == OptimizerKind::kSgd) {
    for (size_t i = 0; i < g.size(); ++i) w[i] -= config_.learning_rate * g[i];
    return;
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double t = static_cast<double>(step_count_);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  double* m = moments->m.data() + offset;
  double* v = moments->v.data() + offset;
  for (size_t i = 0; i < g.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    w[i] -=
        config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

}  // namespace nlu
