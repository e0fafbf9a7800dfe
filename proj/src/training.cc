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

#include "nlu/training.h"

#include <algorithm>
#include <cmath>

#include "nlu/error.h"
#include "nlu/model_file.h"
#include "nlu/optimizer.h"
#include "nlu/rng.h"

namespace nlu {

TrainStats TrainLoop(size_t example_count, std::span<Parameter* const> params,
                     const Hyper& hyper, Rng& rng, const ExampleLoss& loss,
                     const Evaluator& evaluate) {
  hyper.Validate();
  if (example_count == 0) throw DataError("cannot train on an empty corpus");

  std::vector<size_t> order(example_count);
  for (size_t i = 0; i < example_count; ++i) order[i] = i;
  Rng split_rng = rng.Split("holdout");
  split_rng.Shuffle(order);
  const auto holdout_size = static_cast<size_t>(
      std::floor(hyper.holdout_fraction * static_cast<double>(example_count)));
  std::vector<size_t> holdout(
      order.begin(), order.begin() + static_cast<ptrdiff_t>(holdout_size));
  std::vector<size_t> fit(order.begin() + static_cast<ptrdiff_t>(holdout_size),
                          order.end());
  std::sort(holdout.begin(), holdout.end());
  std::sort(fit.begin(), fit.end());
  const std::vector<size_t>& monitored = holdout.empty() ? fit : holdout;

  Optimizer optimizer({OptimizerKind::kAdam, hyper.learning_rate});
  TrainStats stats;
  stats.fit_size = fit.size();
  stats.holdout_size = holdout.size();
  stats.best_score = -1.0;
  std::vector<Tensor> best;
  size_t stale = 0;
  for (size_t epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
    Rng epoch_rng = rng.Split("epoch").Split(epoch);
    std::vector<size_t> visit = fit;
    epoch_rng.Shuffle(visit);
    for (size_t step = 0; step < visit.size(); ++step) {
      Rng example_rng = epoch_rng.Split(step);
      Tape tape;
      Var l = loss(tape, visit[step], example_rng);
      tape.Backward(l);
      optimizer.Step(params, tape.param_grads());
    }
    stats.epochs = epoch;
    const double score = evaluate(monitored);
    if (score > stats.best_score) {
      stats.best_score = score;
      stats.best_epoch = epoch;
      best.clear();
      for (Parameter* p : params) best.push_back(p->value);
      stale = 0;
    } else if (++stale >= hyper.patience) {
      break;
    }
    if (score >= 1.0) break;
  }
  for (size_t i = 0; i < params.size(); ++i) params[i]->value = best[i];
  return stats;
}

void Canonicalize(std::span<Parameter* const> params) {
  for (Parameter* p : params) RoundToFloat(p->value);
}

}  // namespace nlu
