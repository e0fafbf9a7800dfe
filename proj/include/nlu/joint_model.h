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

#ifndef NLU_JOINT_MODEL_H_
#define NLU_JOINT_MODEL_H_

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

// Joint label space. Indices [0, kFusedTokenLabelCount) are token labels:
// the seven slot labels followed by Intent and NonIntent. The ten intents
// follow from kJointIntentOffset and are legal only at BOU/EOU.
inline constexpr size_t kFusedTokenLabelCount = kSlotCount + kKeywordCount;
inline constexpr size_t kJointIntentOffset = kFusedTokenLabelCount;
inline constexpr size_t kJointLabelCount = kFusedTokenLabelCount + kIntentCount;
inline constexpr size_t kFusedIntentKeyword = kSlotCount;  // "Intent"

std::vector<std::string> JointLabels();

// Fused token label: the slot type when not None, else Intent for
// keyword-tagged tokens, else None.
size_t FusedLabel(Slot slot, Keyword keyword);
Slot FusedSlot(size_t fused);
Keyword FusedKeyword(size_t fused);

struct JointPrediction {
  Intent intent = Intent::kOther;
  double confidence = 0.0;
  std::vector<size_t> token_labels;  // fused labels, one per input token
  std::vector<double> bou;           // intent distribution at BOU
  std::vector<double> eou;           // intent distribution at EOU
};

struct IntentDecision {
  Intent intent;
  double confidence;
};

// Combines the BOU and EOU intent distributions: agreeing argmaxes win
// outright; otherwise the more probable argmax wins, EOU on an exact tie.
IntentDecision DecodeBouEou(std::span<const double> bou,
                            std::span<const double> eou);

// Bi-RNN tagger over ⟨BOU⟩ tokens ⟨EOU⟩ whose framing positions carry the
// utterance intent. Every position's softmax is restricted to its legal
// label zone.
class JointModel {
 public:
  static JointModel Train(std::span<const Utterance> corpus, const Hyper& hyper,
                          const TrainInputs& inputs = {});

  JointPrediction Predict(std::span<const std::string> tokens) const;

  size_t label_count() const { return output_.bias.value.size(); }
  const Hyper& hyper() const { return hyper_; }
  const Encoder& encoder() const { return encoder_; }

  ModelFile ToFile() const;
  static JointModel FromFile(const ModelFile& file);

  // Summed cross-entropy over ⟨BOU⟩ tokens ⟨EOU⟩ of one utterance. `rng` drives
  // dropout and may be null when training is false.
  Var Loss(Tape& tape, const Utterance& u, bool training, Rng* rng) const;
  std::vector<Parameter*> parameters(bool include_frozen = false);

 private:
  // Zone-restricted distributions, one per framed position.
  std::vector<Var> Distributions(Tape& tape, std::span<const size_t> ids,
                                 bool training, Rng* rng) const;

  Hyper hyper_;
  Encoder encoder_;
  Dense output_;
};

}  // namespace nlu

#endif  // NLU_JOINT_MODEL_H_
