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

#ifndef NLU_TRAINING_H_
#define NLU_TRAINING_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlu/hyper.h"
#include "nlu/tape.h"

namespace nlu {

class Rng;

struct TrainStats {
  size_t epochs = 0;
  size_t best_epoch = 0;
  double best_score = 0.0;
  size_t fit_size = 0;
  size_t holdout_size = 0;
};

// Builds the loss of one example on a fresh tape. `rng` drives dropout.
using ExampleLoss = std::function<Var(Tape& tape, size_t example, Rng& rng)>;
// Weighted F1 of the current parameters on the given examples.
using Evaluator = std::function<double(std::span<const size_t> examples)>;

// Per-example Adam training with early stopping. A seeded share of the
// examples (hyper.holdout_fraction) is held out and scored after every
// epoch; the best-scoring parameters are restored at the end. Training
// stops after hyper.patience epochs without improvement, at
// hyper.max_epochs, or as soon as the monitored score is perfect (nothing
// can beat it, so the restored parameters would be the same).
TrainStats TrainLoop(size_t example_count, std::span<Parameter* const> params,
                     const Hyper& hyper, Rng& rng, const ExampleLoss& loss,
                     const Evaluator& evaluate);

// Rounds all parameters to f32 so in-memory models equal their saved form.
void Canonicalize(std::span<Parameter* const> params);

}  // namespace nlu

#endif  // NLU_TRAINING_H_
