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

#include "nlu/encoder.h"

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {

Encoder Encoder::Create(std::span<const Utterance> train, const Hyper& hyper,
                        const TrainInputs& inputs, Rng& rng) {
  Encoder e;
  if (inputs.pretrained != nullptr) {
    e.vocab_ = inputs.pretrained->vocab;
    e.embeddings_ = inputs.pretrained->embeddings;
  } else {
    for (auto source : {train, inputs.vocab_extra}) {
      for (const Utterance& u : source) {
        for (const std::string& t : u.tokens) e.vocab_.Add(t);
      }
    }
    Rng erng = rng.Split("embeddings");
    e.embeddings_ = RandomEmbeddings(e.vocab_, hyper.embedding_dim, erng);
  }
  e.embeddings_.trainable = hyper.trainable_embeddings;
  Rng frng = rng.Split("forward");
  Rng brng = rng.Split("backward");
  e.forward_ = CellParams::Init(hyper.cell, e.embeddings_.dim, hyper.hidden_dim,
                                frng, "fwd");
  e.backward_ = CellParams::Init(hyper.cell, e.embeddings_.dim,
                                 hyper.hidden_dim, brng, "bwd");
  return e;
}

std::vector<size_t> Encoder::Ids(std::span<const std::string> tokens,
                                 bool wrap) const {
  std::vector<size_t> ids;
  ids.reserve(tokens.size() + 2);
  if (wrap) ids.push_back(Vocab::kBou);
  for (const std::string& t : tokens) ids.push_back(vocab_.Index(t));
  if (wrap) ids.push_back(Vocab::kEou);
  return ids;
}

BiStates Encoder::Encode(Tape& tape, std::span<const size_t> ids) const {
  std::vector<Var> xs = Embed(tape, embeddings_, ids);
  BiStates s;
  s.forward = Unroll(tape, xs, forward_, /*reverse=*/false);
  s.backward = Unroll(tape, xs, backward_, /*reverse=*/true);
  s.rows.reserve(xs.size());
  for (size_t t = 0; t < xs.size(); ++t) {
    s.rows.push_back(tape.Concat({s.forward[t], s.backward[t]}));
  }
  return s;
}

std::vector<Parameter*> Encoder::parameters(bool include_frozen) {
  std::vector<Parameter*> out;
  if (embeddings_.trainable || include_frozen) {
    out.push_back(&embeddings_.table);
  }
  for (Parameter* p : forward_.parameters()) out.push_back(p);
  for (Parameter* p : backward_.parameters()) out.push_back(p);
  return out;
}

std::vector<const Parameter*> Encoder::parameters() const {
  std::vector<const Parameter*> out;
  out.push_back(&embeddings_.table);
  for (const Parameter* p : forward_.parameters()) out.push_back(p);
  for (const Parameter* p : backward_.parameters()) out.push_back(p);
  return out;
}

void Encoder::Save(ModelFile& file) const {
  file.manifest["vocab"] = vocab_.tokens();
  for (const Parameter* p : parameters()) file.Add(p->name, p->value);
}

Encoder Encoder::Load(const ModelFile& file, const Hyper& hyper) {
  Encoder e;
  try {
    e.vocab_ = Vocab::FromTokens(
        file.manifest.at("vocab").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& ex) {
    throw ModelFormatError(std::string("bad vocabulary: ") + ex.what());
  } catch (const FormatError& ex) {
    throw ModelFormatError(ex.what());
  }
  e.embeddings_.table = {"embedding", file.Get("embedding")};
  if (e.embeddings_.table.value.rank() != 2 ||
      e.embeddings_.table.value.rows() != e.vocab_.size()) {
    throw ModelFormatError("embedding table does not match the vocabulary");
  }
  e.embeddings_.dim = e.embeddings_.table.value.cols();
  e.embeddings_.trainable = hyper.trainable_embeddings;
  Rng unused(0);
  e.forward_ = CellParams::Init(hyper.cell, e.embeddings_.dim, hyper.hidden_dim,
                                unused, "fwd");
  e.backward_ = CellParams::Init(hyper.cell, e.embeddings_.dim,
                                 hyper.hidden_dim, unused, "bwd");
  for (CellParams* cell : {&e.forward_, &e.backward_}) {
    for (Parameter* p : cell->parameters()) {
      const Tensor& t = file.Get(p->name);
      if (t.shape() != p->value.shape()) {
        throw ModelFormatError("tensor '" + p->name + "' has shape " +
                               ShapeString(t.shape()) + ", expected " +
                               ShapeString(p->value.shape()));
      }
      p->value = t;
    }
  }
  return e;
}

Dense Dense::Init(const std::string& name, size_t out, size_t in, Rng& rng) {
  return {InitMatrix(name + ".W", out, in, rng), {name + ".b", Tensor({out})}};
}

Var Dense::Apply(Tape& tape, Var x) const {
  return tape.Add(tape.MatVec(tape.Param(weight), x), tape.Param(bias));
}

}  // namespace nlu
