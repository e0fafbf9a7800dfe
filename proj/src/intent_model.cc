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

#include "nlu/intent_model.h"

#include "nlu/error.h"
#include "nlu/metrics.h"
#include "nlu/rng.h"

namespace nlu {

std::vector<Parameter*> IntentModel::parameters(bool include_frozen) {
  std::vector<Parameter*> out = encoder_.parameters(include_frozen);
  if (attention_) {
    for (Parameter* p : attention_->parameters()) out.push_back(p);
  }
  for (Parameter* p : output_.parameters()) out.push_back(p);
  return out;
}

Var IntentModel::Loss(Tape& tape, const Utterance& u, bool training,
                      Rng* rng) const {
  Var logits = Logits(tape, encoder_.Ids(u.tokens), training, rng, nullptr);
  return tape.CrossEntropy(tape.Softmax(logits), Index(u.intent));
}

Var IntentModel::Logits(Tape& tape, std::span<const size_t> ids, bool training,
                        Rng* rng, Var* attention_weights) const {
  BiStates states = encoder_.Encode(tape, ids);
  Var features;
  if (attention_) {
    Pooled pooled = AttentionPool(tape, states.rows, *attention_);
    features = pooled.context;
    if (attention_weights != nullptr) *attention_weights = pooled.weights;
  } else {
    features = tape.Concat({states.forward.back(), states.backward.front()});
  }
  if (training) features = tape.Dropout(features, hyper_.dropout, *rng, true);
  return output_.Apply(tape, features);
}

IntentModel IntentModel::Train(std::span<const Utterance> corpus,
                               bool use_attention, const Hyper& hyper,
                               const TrainInputs& inputs) {
  hyper.Validate();
  if (corpus.empty()) {
    throw DataError("cannot train an intent model on an empty corpus");
  }
  for (const Utterance& u : corpus) u.Validate();

  Rng rng(hyper.seed);
  Rng init_rng = rng.Split("init");
  IntentModel model;
  model.hyper_ = hyper;
  model.encoder_ = Encoder::Create(corpus, hyper, inputs, init_rng);
  model.hyper_.embedding_dim = model.encoder_.embeddings().dim;
  const size_t width = model.encoder_.output_width();
  if (use_attention) {
    model.attention_ =
        AttentionParams::Init(width, hyper.attention_dim, init_rng);
  }
  model.output_ = Dense::Init("out", kIntentCount, width, init_rng);

  auto loss = [&](Tape& tape, size_t i, Rng& example_rng) {
    return model.Loss(tape, corpus[i], true, &example_rng);
  };
  const std::vector<std::string> labels = IntentLabels();
  auto evaluate = [&](std::span<const size_t> examples) {
    std::vector<size_t> gold;
    std::vector<size_t> pred;
    for (size_t i : examples) {
      gold.push_back(Index(corpus[i].intent));
      pred.push_back(Index(model.Classify(corpus[i].tokens).intent));
    }
    return Score(gold, pred, labels).weighted_f1;
  };

  std::vector<Parameter*> params = model.parameters();
  Rng train_rng = rng.Split("train");
  TrainStats s =
      TrainLoop(corpus.size(), params, hyper, train_rng, loss, evaluate);
  if (inputs.stats != nullptr) *inputs.stats = s;
  Canonicalize(model.parameters(/*include_frozen=*/true));
  return model;
}

Classification IntentModel::Classify(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ContractError("cannot classify an empty utterance");
  Tape tape(/*record_grads=*/false);
  std::vector<size_t> ids = encoder_.Ids(tokens);
  Var weights;
  Var logits = Logits(tape, ids, false, nullptr, &weights);
  Tensor probs = Softmax(logits.value());
  Classification c;
  const size_t best = Argmax(probs.data());
  c.intent = static_cast<Intent>(best);
  c.confidence = probs[best];
  c.distribution = probs.values();
  if (weights.valid()) c.attention = weights.value().values();
  return c;
}

ModelFile IntentModel::ToFile() const {
  ModelFile f;
  f.manifest["kind"] = "intent";
  f.manifest["use_attention"] = use_attention();
  f.manifest["hyper"] = hyper_.ToJson();
  f.manifest["labels"] = IntentLabels();
  encoder_.Save(f);
  if (attention_) {
    for (const Parameter* p : attention_->parameters())
      f.Add(p->name, p->value);
  }
  for (const Parameter* p : output_.parameters()) f.Add(p->name, p->value);
  return f;
}

IntentModel IntentModel::FromFile(const ModelFile& file) {
  IntentModel m;
  bool use_attention = false;
  try {
    if (file.manifest.at("kind") != "intent") {
      throw ModelFormatError("model file does not hold an intent model");
    }
    use_attention = file.manifest.at("use_attention").get<bool>();
    m.hyper_ = Hyper::FromJson(file.manifest.at("hyper"));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad intent manifest: ") + e.what());
  }
  m.encoder_ = Encoder::Load(file, m.hyper_);
  const size_t width = m.encoder_.output_width();
  if (use_attention) {
    AttentionParams a{{"attention.W", file.Get("attention.W")},
                      {"attention.u", file.Get("attention.u")}};
    if (a.projection.value.rank() != 2 || a.input_width() != width ||
        a.projection.value.rows() != a.attention_dim()) {
      throw ModelFormatError("attention parameters have the wrong shape");
    }
    m.attention_ = std::move(a);
  }
  m.output_ = {{"out.W", file.Get("out.W")}, {"out.b", file.Get("out.b")}};
  if (m.output_.weight.value.shape() != Shape{kIntentCount, width} ||
      m.output_.bias.value.size() != kIntentCount) {
    throw ModelFormatError("intent output layer has the wrong shape");
  }
  return m;
}

}  // namespace nlu
