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

#ifndef NLU_ENCODER_H_
#define NLU_ENCODER_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nlu/corpus.h"
#include "nlu/embeddings.h"
#include "nlu/hyper.h"
#include "nlu/model_file.h"
#include "nlu/recurrent.h"
#include "nlu/tape.h"

namespace nlu {

class Rng;

struct TrainStats;

// Optional inputs shared by the model trainers.
struct TrainInputs {
  // Pretrained vectors; when null the vocabulary is built from the corpus.
  const LoadedVectors* pretrained = nullptr;
  // Extra utterances whose tokens join a corpus-built vocabulary.
  std::span<const Utterance> vocab_extra;
  // Receives the training-loop statistics when set.
  TrainStats* stats = nullptr;
};

// Hidden states of a bidirectional pass.
struct BiStates {
  std::vector<Var> forward;   // forward[t], left to right
  std::vector<Var> backward;  // backward[t], produced right to left
  std::vector<Var> rows;      // concat(forward[t], backward[t])
};

// Embedding layer plus a single bidirectional recurrent layer: the shared
// front end of every neural model.
class Encoder {
 public:
  Encoder() = default;

  // Vocabulary and vectors come from inputs.pretrained when given,
  // otherwise the vocabulary is built from the training tokens (plus
  // inputs.vocab_extra) with random vectors.
  static Encoder Create(std::span<const Utterance> train, const Hyper& hyper,
                        const TrainInputs& inputs, Rng& rng);

  // Token ids; with wrap=true the sequence is framed by BOU ... EOU.
  std::vector<size_t> Ids(std::span<const std::string> tokens,
                          bool wrap = false) const;

  BiStates Encode(Tape& tape, std::span<const size_t> ids) const;

  size_t output_width() const { return 2 * forward_.hidden_dim; }
  const Vocab& vocab() const { return vocab_; }
  const EmbeddingMatrix& embeddings() const { return embeddings_; }
  const CellParams& forward_cell() const { return forward_; }
  const CellParams& backward_cell() const { return backward_; }

  // Trainable parameters; a frozen embedding table is included only on
  // request.
  std::vector<Parameter*> parameters(bool include_frozen = false);
  std::vector<const Parameter*> parameters() const;

  // Adds the vocabulary to the manifest and the tensors to the file.
  void Save(ModelFile& file) const;
  static Encoder Load(const ModelFile& file, const Hyper& hyper);

 private:
  Vocab vocab_;
  EmbeddingMatrix embeddings_;
  CellParams forward_;
  CellParams backward_;
};

// Output layer W·x + b.
struct Dense {
  Parameter weight;
  Parameter bias;

  static Dense Init(const std::string& name, size_t out, size_t in, Rng& rng);
  Var Apply(Tape& tape, Var x) const;
  std::vector<Parameter*> parameters() { return {&weight, &bias}; }
  std::vector<const Parameter*> parameters() const { return {&weight, &bias}; }
};

}  // namespace nlu

#endif  // NLU_ENCODER_H_
