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

#include "nlu/joint_model.h"

#include <algorithm>

#include "nlu/error.h"
#include "nlu/metrics.h"
#include "nlu/rng.h"

namespace nlu {

std::vector<std::string> JointLabels() {
  std::vector<std::string> out = SlotLabels();
  for (const std::string& k : KeywordLabels()) out.push_back(k);
  for (const std::string& i : IntentLabels()) out.push_back(i);
  return out;
}

size_t FusedLabel(Slot slot, Keyword keyword) {
  if (slot != Slot::kNone) return Index(slot);
  if (keyword == Keyword::kIntent) return kFusedIntentKeyword;
  return Index(Slot::kNone);
}

Slot FusedSlot(size_t fused) {
  return fused < kSlotCount ? static_cast<Slot>(fused) : Slot::kNone;
}

Keyword FusedKeyword(size_t fused) {
  return fused == kFusedIntentKeyword ? Keyword::kIntent : Keyword::kNonIntent;
}

IntentDecision DecodeBouEou(std::span<const double> bou,
                            std::span<const double> eou) {
  const size_t b = Argmax(bou);
  const size_t e = Argmax(eou);
  if (b == e) return {static_cast<Intent>(b), std::max(bou[b], eou[e])};
  if (bou[b] > eou[e]) return {static_cast<Intent>(b), bou[b]};
  return {static_cast<Intent>(e), eou[e]};
}

std::vector<Parameter*> JointModel::parameters(bool include_frozen) {
  std::vector<Parameter*> out = encoder_.parameters(include_frozen);
  for (Parameter* p : output_.parameters()) out.push_back(p);
  return out;
}

std::vector<Var> JointModel::Distributions(Tape& tape,
                                           std::span<const size_t> ids,
                                           bool training, Rng* rng) const {
  BiStates states = encoder_.Encode(tape, ids);
  const size_t last = ids.size() - 1;
  std::vector<Var> out;
  out.reserve(ids.size());
  for (size_t t = 0; t < ids.size(); ++t) {
    Var row = states.rows[t];
    if (training) row = tape.Dropout(row, hyper_.dropout, *rng, true);
    Var logits = output_.Apply(tape, row);
    const bool frame = t == 0 || t == last;
    Var zone = frame ? tape.Slice(logits, kJointIntentOffset, kIntentCount)
                     : tape.Slice(logits, 0, kFusedTokenLabelCount);
    out.push_back(tape.Softmax(zone));
  }
  return out;
}

JointModel JointModel::Train(std::span<const Utterance> corpus,
                             const Hyper& hyper, const TrainInputs& inputs) {
  hyper.Validate();
  if (corpus.empty()) {
    throw DataError("cannot train a joint model on an empty corpus");
  }
  for (const Utterance& u : corpus) u.Validate();

  Rng rng(hyper.seed);
  Rng init_rng = rng.Split("init");
  JointModel model;
  model.hyper_ = hyper;
  model.encoder_ = Encoder::Create(corpus, hyper, inputs, init_rng);
  model.hyper_.embedding_dim = model.encoder_.embeddings().dim;
  model.output_ = Dense::Init("out", kJointLabelCount,
                              model.encoder_.output_width(), init_rng);

  auto loss = [&](Tape& tape, size_t i, Rng& example_rng) {
    return model.Loss(tape, corpus[i], true, &example_rng);
  };
  // Mean of utterance-intent and token weighted F1.
  const std::vector<std::string> intent_labels = IntentLabels();
  const std::vector<std::string> token_labels = JointLabels();
  auto evaluate = [&](std::span<const size_t> examples) {
    std::vector<size_t> gold_intent, pred_intent, gold_tok, pred_tok;
    for (size_t i : examples) {
      const Utterance& u = corpus[i];
      JointPrediction p = model.Predict(u.tokens);
      gold_intent.push_back(Index(u.intent));
      pred_intent.push_back(Index(p.intent));
      for (size_t t = 0; t < u.tokens.size(); ++t) {
        gold_tok.push_back(FusedLabel(u.slots[t], u.keywords[t]));
        pred_tok.push_back(p.token_labels[t]);
      }
    }
    return 0.5 * (Score(gold_intent, pred_intent, intent_labels).weighted_f1 +
                  Score(gold_tok, pred_tok, token_labels).weighted_f1);
  };

  std::vector<Parameter*> params = model.parameters();
  Rng train_rng = rng.Split("train");
  TrainStats s =
      TrainLoop(corpus.size(), params, hyper, train_rng, loss, evaluate);
  if (inputs.stats != nullptr) *inputs.stats = s;
  Canonicalize(model.parameters(/*include_frozen=*/true));
  return model;
}

Var JointModel::Loss(Tape& tape, const Utterance& u, bool training,
                     Rng* rng) const {
  std::vector<Var> dists =
      Distributions(tape, encoder_.Ids(u.tokens, /*wrap=*/true), training, rng);
  std::vector<Var> terms;
  terms.reserve(dists.size());
  const size_t intent = Index(u.intent);
  terms.push_back(tape.CrossEntropy(dists.front(), intent));
  for (size_t t = 0; t < u.tokens.size(); ++t) {
    terms.push_back(
        tape.CrossEntropy(dists[t + 1], FusedLabel(u.slots[t], u.keywords[t])));
  }
  terms.push_back(tape.CrossEntropy(dists.back(), intent));
  return tape.Sum(terms);
}

JointPrediction JointModel::Predict(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ContractError("cannot predict an empty utterance");
  Tape tape(/*record_grads=*/false);
  std::vector<size_t> ids = encoder_.Ids(tokens, /*wrap=*/true);
  std::vector<Var> dists = Distributions(tape, ids, false, nullptr);
  JointPrediction p;
  p.bou = dists.front().value().values();
  p.eou = dists.back().value().values();
  IntentDecision d = DecodeBouEou(p.bou, p.eou);
  p.intent = d.intent;
  p.confidence = d.confidence;
  for (size_t t = 1; t + 1 < dists.size(); ++t) {
    p.token_labels.push_back(Argmax(dists[t].value().data()));
  }
  return p;
}

ModelFile JointModel::ToFile() const {
  ModelFile f;
  f.manifest["kind"] = "joint";
  f.manifest["hyper"] = hyper_.ToJson();
  f.manifest["labels"] = JointLabels();
  f.manifest["token_label_count"] = kFusedTokenLabelCount;
  encoder_.Save(f);
  for (const Parameter* p : output_.parameters()) f.Add(p->name, p->value);
  return f;
}

JointModel JointModel::FromFile(const ModelFile& file) {
  JointModel m;
  try {
    if (file.manifest.at("kind") != "joint") {
      throw ModelFormatError("model file does not hold a joint model");
    }
    m.hyper_ = Hyper::FromJson(file.manifest.at("hyper"));
    if (file.manifest.at("labels").size() != kJointLabelCount) {
      throw ModelFormatError("joint label space has the wrong size");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad joint manifest: ") + e.what());
  }
  m.encoder_ = Encoder::Load(file, m.hyper_);
  m.output_ = {{"out.W", file.Get("out.W")}, {"out.b", file.Get("out.b")}};
  if (m.output_.weight.value.shape() !=
          Shape{kJointLabelCount, m.encoder_.output_width()} ||
      m.output_.bias.value.size() != kJointLabelCount) {
    throw ModelFormatError("joint output layer has the wrong shape");
  }
  return m;
}

}  // namespace nlu
