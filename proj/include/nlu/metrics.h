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

#ifndef NLU_METRICS_H_
#define NLU_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlu {

struct ClassMetrics {
  std::string label;
  size_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Scores {
  std::vector<ClassMetrics> classes;  // one row per label, label order
  // Σ support·f1 / Σ support over classes with support > 0.
  double weighted_f1 = 0.0;
  size_t total = 0;
};

// One-vs-rest precision, recall and F1 per label. Labels are indices into
// `labels`. Precision is 0 for a class that is never predicted, recall is 0
// for a class with no support, and F1 is 0 whenever P + R == 0.
Scores Score(std::span<const size_t> gold, std::span<const size_t> pred,
             std::span<const std::string> labels);

// matrix[g][p] counts of gold label g predicted as p.
std::vector<std::vector<size_t>> Confusion(std::span<const size_t> gold,
                                           std::span<const size_t> pred,
                                           size_t label_count);

}  // namespace nlu

#endif  // NLU_METRICS_H_
