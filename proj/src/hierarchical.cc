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

#include "nlu/hierarchical.h"

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {

std::vector<std::string> HierarchicalReduce(std::span<const std::string> tokens,
                                            std::span<const Slot> slots,
                                            std::span<const Keyword> keywords) {
  if (slots.size() != tokens.size() || keywords.size() != tokens.size()) {
    throw ContractError(
        "reduce needs equally long token, slot and keyword lists");
  }
  std::vector<std::string> kept;
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (keywords[t] == Keyword::kIntent || slots[t] != Slot::kNone) {
      kept.push_back(tokens[t]);
    }
  }
  if (kept.empty()) return {tokens.begin(), tokens.end()};
  return kept;
}

Utterance ReduceUtterance(const Utterance& u) {
  Utterance r;
  r.id = u.id;
  r.intent = u.intent;
  for (size_t t = 0; t < u.tokens.size(); ++t) {
    if (u.keywords[t] == Keyword::kIntent || u.slots[t] != Slot::kNone) {
      r.tokens.push_back(u.tokens[t]);
      r.slots.push_back(u.slots[t]);
      r.keywords.push_back(u.keywords[t]);
    }
  }
  if (r.tokens.empty()) return u;
  return r;
}

Hyper ComponentHyper(const Hyper& hyper, std::string_view component) {
  Hyper h = hyper;
  h.seed = Rng::Mix(hyper.seed ^ Fnv1a(component));
  return h;
}

HierarchicalPipeline::HierarchicalPipeline(TaggerModel slot,
                                           TaggerModel keyword,
                                           IntentModel stage2)
    : slot_(std::move(slot)),
      keyword_(std::move(keyword)),
      intent_(std::move(stage2)) {
  if (slot_.task() != TaggerTask::kSlot ||
      keyword_.task() != TaggerTask::kKeyword) {
    throw ContractError("pipeline needs a slot tagger and a keyword tagger");
  }
}

HierarchicalPipeline::HierarchicalPipeline(TaggerModel slot,
                                           TaggerModel keyword,
                                           JointModel stage2)
    : slot_(std::move(slot)),
      keyword_(std::move(keyword)),
      joint_(std::move(stage2)) {
  if (slot_.task() != TaggerTask::kSlot ||
      keyword_.task() != TaggerTask::kKeyword) {
    throw ContractError("pipeline needs a slot tagger and a keyword tagger");
  }
}

HierarchicalPipeline HierarchicalPipeline::Train(
    std::span<const Utterance> corpus, Stage2Kind kind, const Hyper& hyper,
    const LoadedVectors* pretrained) {
  if (corpus.empty())
    throw DataError("cannot train a pipeline on an empty corpus");
  TrainInputs inputs;
  inputs.pretrained = pretrained;
  TaggerModel slot = TaggerModel::Train(
      corpus, TaggerTask::kSlot, ComponentHyper(hyper, "slot_tagger"), inputs);
  TaggerModel keyword =
      TaggerModel::Train(corpus, TaggerTask::kKeyword,
                         ComponentHyper(hyper, "keyword_tagger"), inputs);
  Corpus reduced;
  reduced.reserve(corpus.size());
  for (const Utterance& u : corpus) reduced.push_back(ReduceUtterance(u));
  TrainInputs stage2_inputs = inputs;
  stage2_inputs.vocab_extra = corpus;
  const Hyper stage2_hyper = ComponentHyper(hyper, "stage2");
  switch (kind) {
    case Stage2Kind::kSeparate:
    case Stage2Kind::kSeparateAttention:
      return HierarchicalPipeline(
          std::move(slot), std::move(keyword),
          IntentModel::Train(reduced, kind == Stage2Kind::kSeparateAttention,
                             stage2_hyper, stage2_inputs));
    case Stage2Kind::kJoint:
      return HierarchicalPipeline(
          std::move(slot), std::move(keyword),
          JointModel::Train(reduced, stage2_hyper, stage2_inputs));
  }
  throw ContractError("unknown stage-2 kind");
}

HierarchicalResult HierarchicalPipeline::Predict(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ContractError("cannot predict an empty utterance");
  HierarchicalResult r;
  r.slots = slot_.TagSlots(tokens);
  r.keywords = keyword_.TagKeywords(tokens);
  r.reduced = HierarchicalReduce(tokens, r.slots, r.keywords);
  if (intent_) {
    Classification c = intent_->Classify(r.reduced);
    r.intent = c.intent;
    r.confidence = c.confidence;
  } else {
    JointPrediction p = joint_->Predict(r.reduced);
    r.intent = p.intent;
    r.confidence = p.confidence;
  }
  return r;
}

}  // namespace nlu
