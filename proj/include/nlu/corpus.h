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

#ifndef NLU_CORPUS_H_
#define NLU_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlu/schema.h"

namespace nlu {

// One annotated command. tokens, slots and keywords are parallel.
struct Utterance {
  uint64_t id = 0;
  std::vector<std::string> tokens;
  std::vector<Slot> slots;
  std::vector<Keyword> keywords;
  Intent intent = Intent::kOther;

  // Throws DataError when the parallel lists disagree or tokens are empty.
  void Validate() const;

  bool operator==(const Utterance&) const = default;
};

using Corpus = std::vector<Utterance>;

// Lowercases, splits on whitespace and detaches leading/trailing ASCII
// punctuation into one token per character.
std::vector<std::string> Tokenize(std::string_view text);

// Reads the TSV corpus format:
//   # id=<uint>\tintent=<Intent>
//   token\tslot\tkeyword        (one line per token)
//   <blank line>
// Throws DataError citing the offending line number.
Corpus ParseCorpus(std::istream& in);
Corpus ParseCorpus(std::string_view text);
Corpus ReadCorpusFile(const std::string& path);

// Inverse of ParseCorpus; LF endings, one blank line after each utterance.
std::string WriteCorpus(std::span<const Utterance> corpus);
void WriteCorpusFile(const std::string& path,
                     std::span<const Utterance> corpus);

// Stable 64-bit fingerprint of a corpus (order sensitive).
uint64_t Fingerprint(std::span<const Utterance> corpus);

struct Fold {
  std::vector<size_t> train;  // ascending corpus indices
  std::vector<size_t> test;   // ascending corpus indices
};

// Stratified k-fold split: utterances are shuffled by `seed`, grouped by
// intent and dealt round-robin, so test folds partition the corpus, differ
// in size by at most one, and keep per-intent counts within one.
std::vector<Fold> KFoldSplit(std::span<const Utterance> corpus, size_t k,
                             uint64_t seed);

Corpus Select(std::span<const Utterance> corpus,
              std::span<const size_t> indices);

}  // namespace nlu

#endif  // NLU_CORPUS_H_
