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

#include "nlu/tagger.h"

#include "nlu/error.h"
#include "nlu/metrics.h"
#include "nlu/rng.h"

namespace nlu {

const char* TaskName(TaggerTask task) {
  return task == TaggerTask::kSlot ? "slot" : "keyword";
}

TaggerTask ParseTaggerTask(const std::string& name) {
  if (name == "slot") return TaggerTask::kSlot;
  if (name == "keyword") return TaggerTask::kKeyword;
  throw ModelFormatError("unknown tagger task '" + name + "'");
}

size_t GoldLabel(const Utterance& u, size_t t, TaggerTask task) {
  return task == TaggerTask::kSlot ? Index(u.slots[t]) : Index(u.keywords[t]);
}

std::vector<std::string> TaskLabels(TaggerTask task) {
  return task == TaggerTask::kSlot ? SlotLabels() : KeywordLabels();
}

std::vector<Parameter*> TaggerModel::parameters(bool include_frozen) {
  std::vector<Parameter*> out = encoder_.parameters(include_frozen);
  for (Parameter* p : output_.parameters()) out.push_back(p);
  return out;
}

Var TaggerModel::Loss(Tape& tape, const Utterance& u, bool training,
                      Rng* rng) const {
  std::vector<Var> logits = Logits(tape, encoder_.Ids(u.tokens), training, rng);
  std::vector<Var> terms;
  terms.reserve(logits.size());
  for (size_t t = 0; t < logits.size(); ++t) {
    terms.push_back(
        tape.CrossEntropy(tape.Softmax(logits[t]), GoldLabel(u, t, task_)));
  }
  return tape.Sum(terms);
}

std::vector<Var> TaggerModel::Logits(Tape& tape, std::span<const size_t> ids,
                                     bool training, Rng* rng) const {
  BiStates states = encoder_.Encode(tape, ids);
  std::vector<Var> logits;
  logits.reserve(ids.size());
  for (Var row : states.rows) {
    if (training) row = tape.Dropout(row, hyper_.dropout, *rng, true);
    logits.push_back(output_.Apply(tape, row));
  }
  return logits;
}

TaggerModel TaggerModel::Train(std::span<const Utterance> corpus,
                               TaggerTask task, const Hyper& hyper,
                               const TrainInputs& inputs) {
  hyper.Validate();
  if (corpus.empty())
    throw DataError("cannot train a tagger on an empty corpus");
  for (const Utterance& u : corpus) u.Validate();

  Rng rng(hyper.seed);
  Rng init_rng = rng.Split("init");
  TaggerModel model;
  model.task_ = task;
  model.hyper_ = hyper;
  model.encoder_ = Encoder::Create(corpus, hyper, inputs, init_rng);
  model.hyper_.embedding_dim = model.encoder_.embeddings().dim;
  model.output_ = Dense::Init("out", TaskLabels(task).size(),
                              model.encoder_.output_width(), init_rng);

  auto loss = [&](Tape& tape, size_t i, Rng& example_rng) {
    return model.Loss(tape, corpus[i], true, &example_rng);
  };
  const std::vector<std::string> labels = TaskLabels(task);
  auto evaluate = [&](std::span<const size_t> examples) {
    std::vector<size_t> gold;
    std::vector<size_t> pred;
    for (size_t i : examples) {
      TagResult r = model.Tag(corpus[i].tokens);
      for (size_t t = 0; t < r.labels.size(); ++t) {
        gold.push_back(GoldLabel(corpus[i], t, task));
        pred.push_back(r.labels[t]);
      }
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

TagResult TaggerModel::Tag(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ContractError("cannot tag an empty utterance");
  Tape tape(/*record_grads=*/false);
  std::vector<size_t> ids = encoder_.Ids(tokens);
  std::vector<Var> logits = Logits(tape, ids, false, nullptr);
  TagResult r;
  for (Var l : logits) {
    Tensor probs = Softmax(l.value());
    r.labels.push_back(Argmax(probs.data()));
    r.probabilities.push_back(probs.values());
  }
  return r;
}

std::vector<Slot> TaggerModel::TagSlots(
    std::span<const std::string> tokens) const {
  if (task_ != TaggerTask::kSlot) throw ContractError("not a slot tagger");
  std::vector<Slot> out;
  for (size_t l : Tag(tokens).labels) out.push_back(static_cast<Slot>(l));
  return out;
}

std::vector<Keyword> TaggerModel::TagKeywords(
    std::span<const std::string> tokens) const {
  if (task_ != TaggerTask::kKeyword)
    throw ContractError("not a keyword tagger");
  std::vector<Keyword> out;
  for (size_t l : Tag(tokens).labels) out.push_back(static_cast<Keyword>(l));
  return out;
}

ModelFile TaggerModel::ToFile() const {
  ModelFile f;
  f.manifest["kind"] = "tagger";
  f.manifest["task"] = TaskName(task_);
  f.manifest["hyper"] = hyper_.ToJson();
  f.manifest["labels"] = labels();
  encoder_.Save(f);
  for (const Parameter* p : output_.parameters()) f.Add(p->name, p->value);
  return f;
}

TaggerModel TaggerModel::FromFile(const ModelFile& file) {
  TaggerModel m;
  try {
    if (file.manifest.at("kind") != "tagger") {
      throw ModelFormatError("model file does not hold a tagger");
    }
    m.task_ = ParseTaggerTask(file.manifest.at("task").get<std::string>());
    m.hyper_ = Hyper::FromJson(file.manifest.at("hyper"));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad tagger manifest: ") + e.what());
  }
  m.encoder_ = Encoder::Load(file, m.hyper_);
  m.output_ = {{"out.W", file.Get("out.W")}, {"out.b", file.Get("out.b")}};
  const Shape expected{TaskLabels(m.task_).size(), m.encoder_.output_width()};
  if (m.output_.weight.value.shape() != expected ||
      m.output_.bias.value.size() != expected[0]) {
    throw ModelFormatError("tagger output layer has the wrong shape");
  }
  return m;
}

}  // namespace nlu
