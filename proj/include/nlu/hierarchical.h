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

#ifndef NLU_HIERARCHICAL_H_
#define NLU_HIERARCHICAL_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlu/corpus.h"
#include "nlu/hyper.h"
#include "nlu/intent_model.h"
#include "nlu/joint_model.h"
#include "nlu/tagger.h"

namespace nlu {

// Keeps, in order, every token tagged as an intent keyword or with a slot
// other than None. An empty result falls back to the full sequence.
std::vector<std::string> HierarchicalReduce(std::span<const std::string> tokens,
                                            std::span<const Slot> slots,
                                            std::span<const Keyword> keywords);

// Applies HierarchicalReduce to a gold-annotated utterance; tags follow the
// kept tokens.
Utterance ReduceUtterance(const Utterance& u);

// A copy of `hyper` whose seed is derived from (hyper.seed, component).
Hyper ComponentHyper(const Hyper& hyper, std::string_view component);

enum class Stage2Kind { kSeparate, kSeparateAttention, kJoint };

struct HierarchicalResult {
  Intent intent = Intent::kOther;
  double confidence = 0.0;
  std::vector<Slot> slots;           // stage-1 slot tags
  std::vector<Keyword> keywords;     // stage-1 keyword tags
  std::vector<std::string> reduced;  // stage-2 input
};

// Two-stage intent recognizer: slot and keyword taggers reduce the
// utterance, a separate or joint model classifies the reduced sequence.
class HierarchicalPipeline {
 public:
  HierarchicalPipeline(TaggerModel slot, TaggerModel keyword,
                       IntentModel stage2);
  HierarchicalPipeline(TaggerModel slot, TaggerModel keyword,
                       JointModel stage2);

  // Stage 1 trains on the corpus; stage 2 trains on the gold-reduced corpus
  // with a vocabulary covering the full training tokens.
  static HierarchicalPipeline Train(std::span<const Utterance> corpus,
                                    Stage2Kind kind, const Hyper& hyper,
                                    const LoadedVectors* pretrained = nullptr);

  HierarchicalResult Predict(std::span<const std::string> tokens) const;

  const TaggerModel& slot_tagger() const { return slot_; }
  const TaggerModel& keyword_tagger() const { return keyword_; }
  const IntentModel* intent_model() const {
    return intent_ ? &*intent_ : nullptr;
  }
  const JointModel* joint_model() const { return joint_ ? &*joint_ : nullptr; }

 private:
  TaggerModel slot_;
  TaggerModel keyword_;
  std::optional<IntentModel> intent_;
  std::optional<JointModel> joint_;
};

}  // namespace nlu

#endif  // NLU_HIERARCHICAL_H_
