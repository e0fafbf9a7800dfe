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

#ifndef NLU_INTENT_MODEL_H_
#define NLU_INTENT_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlu/corpus.h"
#include "nlu/encoder.h"
#include "nlu/hyper.h"
#include "nlu/model_file.h"
#include "nlu/training.h"

namespace nlu {

struct Classification {
  Intent intent = Intent::kOther;
  double confidence = 0.0;
  std::vector<double> distribution;  // softmax over the 10 intents
  std::vector<double> attention;     // empty without attention
};

// Sequence-to-one intent classifier. The classifier input is either the
// attention-pooled context or concat(last forward state, first backward
// state).
class IntentModel {
 public:
  static IntentModel Train(std::span<const Utterance> corpus,
                           bool use_attention, const Hyper& hyper,
                           const TrainInputs& inputs = {});

  Classification Classify(std::span<const std::string> tokens) const;

  bool use_attention() const { return attention_.has_value(); }
  const Hyper& hyper() const { return hyper_; }
  const Encoder& encoder() const { return encoder_; }

  ModelFile ToFile() const;
  static IntentModel FromFile(const ModelFile& file);

  // Intent cross-entropy of one utterance. `rng` drives
  // dropout and may be null when training is false.
  Var Loss(Tape& tape, const Utterance& u, bool training, Rng* rng) const;
  std::vector<Parameter*> parameters(bool include_frozen = false);

 private:
  Var Logits(Tape& tape, std::span<const size_t> ids, bool training, Rng* rng,
             Var* attention_weights) const;

  Hyper hyper_;
  Encoder encoder_;
  std::optional<AttentionParams> attention_;
  Dense output_;
};

}  // namespace nlu

#endif  // NLU_INTENT_MODEL_H_
