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

#ifndef NLU_TAGGER_H_
#define NLU_TAGGER_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nlu/corpus.h"
#include "nlu/encoder.h"
#include "nlu/hyper.h"
#include "nlu/model_file.h"
#include "nlu/training.h"

namespace nlu {

enum class TaggerTask { kSlot, kKeyword };

const char* TaskName(TaggerTask task);
TaggerTask ParseTaggerTask(const std::string& name);

// Gold label index of token t for the task.
size_t GoldLabel(const Utterance& u, size_t t, TaggerTask task);
std::vector<std::string> TaskLabels(TaggerTask task);

struct TagResult {
  std::vector<size_t> labels;  // argmax, lowest index on ties
  std::vector<std::vector<double>> probabilities;  // softmax per token
};

// Bi-RNN sequence tagger: one softmax over the task's labels per token.
class TaggerModel {
 public:
  // Per-token cross-entropy summed over the sequence, early stopping on
  // held-out weighted token F1. Deterministic in hyper.seed.
  static TaggerModel Train(std::span<const Utterance> corpus, TaggerTask task,
                           const Hyper& hyper, const TrainInputs& inputs = {});

  TagResult Tag(std::span<const std::string> tokens) const;
  std::vector<Slot> TagSlots(std::span<const std::string> tokens) const;
  std::vector<Keyword> TagKeywords(std::span<const std::string> tokens) const;

  TaggerTask task() const { return task_; }
  size_t label_count() const { return output_.bias.value.size(); }
  std::vector<std::string> labels() const { return TaskLabels(task_); }
  const Hyper& hyper() const { return hyper_; }
  const Encoder& encoder() const { return encoder_; }

  ModelFile ToFile() const;
  static TaggerModel FromFile(const ModelFile& file);

  // Summed per-token cross-entropy of one utterance. `rng` drives
  // dropout and may be null when training is false.
  Var Loss(Tape& tape, const Utterance& u, bool training, Rng* rng) const;
  std::vector<Parameter*> parameters(bool include_frozen = false);

 private:
  std::vector<Var> Logits(Tape& tape, std::span<const size_t> ids,
                          bool training, Rng* rng) const;

  TaggerTask task_ = TaggerTask::kSlot;
  Hyper hyper_;
  Encoder encoder_;
  Dense output_;
};

}  // namespace nlu

#endif  // NLU_TAGGER_H_
