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

#ifndef NLU_CV_H_
#define NLU_CV_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlu/bundle.h"
#include "nlu/corpus.h"
#include "nlu/embeddings.h"
#include "nlu/hyper.h"
#include "nlu/metrics.h"

namespace nlu {

// What one fold's model produced on its test utterances.
struct FoldOutput {
  std::vector<size_t> gold;
  std::vector<size_t> pred;
  // Fingerprint of the exact training utterances the fold's model saw.
  uint64_t train_fingerprint = 0;
  // Fingerprint of the fold's frequency table (hybrid specs).
  std::optional<uint64_t> table_fingerprint;
};

struct FoldRecord {
  size_t index = 0;
  size_t train_size = 0;
  std::vector<uint64_t> test_ids;
  uint64_t train_fingerprint = 0;
  std::optional<uint64_t> table_fingerprint;
  Scores scores;
};

struct CvReport {
  std::string task;
  uint64_t seed = 0;
  size_t k = 0;
  nlohmann::json hyper = nlohmann::json::object();
  // Scored on the pooled predictions of all folds.
  Scores scores;
  std::vector<FoldRecord> folds;

  nlohmann::json ToJson() const;
  static CvReport FromJson(const nlohmann::json& j);
  // Stable text form: ToJson() pretty-printed, LF terminated.
  std::string Serialize() const;
};

// Trains on `train` and predicts `test` for fold `fold`.
using FoldEvaluator =
    std::function<FoldOutput(std::span<const Utterance> train,
                             std::span<const Utterance> test, size_t fold)>;

// Generic k-fold driver: splits with KFoldSplit(corpus, k, seed), runs the
// evaluator per fold (on up to `threads` threads), pools the predictions and
// scores them against `labels`.
CvReport RunCvWith(const std::string& task, std::span<const std::string> labels,
                   std::span<const Utterance> corpus, size_t k, uint64_t seed,
                   const FoldEvaluator& evaluate, size_t threads = 1);

// Seed of the models trained for fold `fold`.
uint64_t FoldSeed(uint64_t seed, size_t fold);

// Label set scored for a spec: slot labels, keyword labels or intents.
std::vector<std::string> SpecLabels(ModelSpec spec);

// Cross-validates a model spec. Every fold trains from its training
// utterances only; tagger specs are scored per token, the others per
// utterance.
CvReport RunCv(ModelSpec spec, const Hyper& hyper,
               std::span<const Utterance> corpus, size_t k, uint64_t seed,
               const LoadedVectors* pretrained = nullptr, size_t threads = 1);

}  // namespace nlu

#endif  // NLU_CV_H_
