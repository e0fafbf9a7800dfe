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

#include "nlu/metrics.h"

#include "nlu/error.h"

namespace nlu {

std::vector<std::vector<size_t>> Confusion(std::span<const size_t> gold,
                                           std::span<const size_t> pred,
                                           size_t label_count) {
  if (gold.size() != pred.size()) {
    throw ContractError("gold has " + std::to_string(gold.size()) +
                        " labels but prediction has " +
                        std::to_string(pred.size()));
  }
  std::vector<std::vector<size_t>> m(label_count,
                                     std::vector<size_t>(label_count, 0));
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= label_count || pred[i] >= label_count) {
      throw IndexError("label index out of range at position " +
                       std::to_string(i));
    }
    ++m[gold[i]][pred[i]];
  }
  return m;
}

Scores Score(std::span<const size_t> gold, std::span<const size_t> pred,
             std::span<const std::string> labels) {
  const size_t n = labels.size();
  auto m = Confusion(gold, pred, n);
  Scores s;
  s.total = gold.size();
  double weighted = 0.0;
  size_t support_sum = 0;
  for (size_t c = 0; c < n; ++c) {
    size_t tp = m[c][c];
    size_t support = 0;
    size_t predicted = 0;
    for (size_t j = 0; j < n; ++j) {
      support += m[c][j];
      predicted += m[j][c];
    }
    ClassMetrics cm;
    cm.label = labels[c];
    cm.support = support;
    cm.precision = predicted > 0 ? static_cast<double>(tp) / predicted : 0.0;
    cm.recall = support > 0 ? static_cast<double>(tp) / support : 0.0;
    const double pr = cm.precision + cm.recall;
    cm.f1 = pr > 0.0 ? 2.0 * cm.precision * cm.recall / pr : 0.0;
    if (support > 0) {
      weighted += static_cast<double>(support) * cm.f1;
      support_sum += support;
    }
    s.classes.push_back(std::move(cm));
  }
  s.weighted_f1 = support_sum > 0 ? weighted / support_sum : 0.0;
  return s;
}

}  // namespace nlu
