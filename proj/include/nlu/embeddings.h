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

#ifndef NLU_EMBEDDINGS_H_
#define NLU_EMBEDDINGS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlu/tape.h"
#include "nlu/tensor.h"

namespace nlu {

class Rng;

// ASCII lowercase; other bytes pass through unchanged.
std::string CaseFold(std::string_view token);

// Token <-> index map with four reserved entries at fixed positions.
class Vocab {
 public:
  static constexpr size_t kPad = 0;
  static constexpr size_t kUnk = 1;
  static constexpr size_t kBou = 2;
  static constexpr size_t kEou = 3;
  static constexpr size_t kReserved = 4;

  Vocab();

  // Adds the case-folded token. Returns (index, inserted).
  std::pair<size_t, bool> Add(std::string_view token);

  // Case-folded lookup; unknown tokens map to kUnk.
  size_t Index(std::string_view token) const;
  bool Contains(std::string_view token) const;

  const std::string& Token(size_t index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  size_t size() const { return tokens_.size(); }

  // Rebuilds a vocabulary from its serialized token list (reserved first).
  static Vocab FromTokens(std::span<const std::string> tokens);

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, size_t> index_;
};

// Embedding table [V×d]. Row kPad is zero; row kUnk starts as the mean of
// the other word vectors.
struct EmbeddingMatrix {
  Parameter table;
  size_t dim = 0;
  bool trainable = true;

  size_t rows() const { return table.value.rows(); }
};

struct LoadedVectors {
  Vocab vocab;
  EmbeddingMatrix embeddings;
  // Lines skipped because their (case-folded) token was already present.
  size_t duplicates = 0;
};

// Reads whitespace-separated text vectors (`token v1 ... vd` per line).
// Words are indexed in file order after the reserved slots. The BOU/EOU rows
// are drawn from `rng`. Throws FormatError naming the offending line.
LoadedVectors LoadVectors(std::istream& in, size_t expected_dim, Rng& rng);
LoadedVectors LoadVectorsFile(const std::string& path, size_t expected_dim,
                              Rng& rng);

// Random table for a vocabulary built from a corpus (no pretrained file).
EmbeddingMatrix RandomEmbeddings(const Vocab& vocab, size_t dim, Rng& rng);

// Row gather -> [T×d].
Tensor Embed(const EmbeddingMatrix& matrix, std::span<const size_t> indices);

// Row gather on a tape; rows take part in autodiff when the table is
// trainable and the tape records gradients.
std::vector<Var> Embed(Tape& tape, const EmbeddingMatrix& matrix,
                       std::span<const size_t> indices);

// Writes synthetic text vectors: words sharing a cluster id share a random
// centroid, so the file behaves like a (tiny) pretrained space.
void WriteClusteredVectors(
    std::ostream& out,
    std::span<const std::pair<std::string, std::string>> word_clusters,
    size_t dim, uint64_t seed);

}  // namespace nlu

#endif  // NLU_EMBEDDINGS_H_
