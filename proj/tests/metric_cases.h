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

#ifndef NLU_TESTS_METRIC_CASES_H_
#define NLU_TESTS_METRIC_CASES_H_

#include <string>
#include <vector>

namespace nlu::testing {

struct ExpectedClass {
  size_t support;
  double precision;
  double recall;
  double f1;
};

// A gold/pred pair with hand-computed one-vs-rest scores.
struct MetricCase {
  std::string name;
  std::vector<std::string> labels;
  std::vector<size_t> gold;
  std::vector<size_t> pred;
  std::vector<ExpectedClass> expected;  // one per label
  double weighted_f1;
};

inline std::vector<MetricCase> MetricCases() {
  return {
      {"perfect",
       {"A", "B", "C"},
       {0, 1, 2, 2, 1},
       {0, 1, 2, 2, 1},
       {{1, 1.0, 1.0, 1.0}, {2, 1.0, 1.0, 1.0}, {2, 1.0, 1.0, 1.0}},
       1.0},
      // A: TP 1, FP 0, FN 1. B: TP 2, FP 1, FN 0.
      {"four samples",
       {"A", "B"},
       {0, 0, 1, 1},
       {0, 1, 1, 1},
       {{2, 1.0, 0.5, 2.0 / 3.0}, {2, 2.0 / 3.0, 1.0, 0.8}},
       (2 * (2.0 / 3.0) + 2 * 0.8) / 4},
      // Everything predicted A on balanced gold.
      {"one class predicted",
       {"A", "B"},
       {0, 0, 1, 1},
       {0, 0, 0, 0},
       {{2, 0.5, 1.0, 2.0 / 3.0}, {2, 0.0, 0.0, 0.0}},
       1.0 / 3.0},
      // Stop: TP 3 FP 1 FN 1. Park: TP 2 FP 2 FN 1. Other: TP 2 FP 0 FN 1.
      {"ten samples, three classes",
       {"Stop", "Park", "Other"},
       {0, 0, 0, 0, 1, 1, 1, 2, 2, 2},
       {0, 0, 0, 1, 1, 1, 0, 2, 2, 1},
       {{4, 0.75, 0.75, 0.75},
        {3, 0.5, 2.0 / 3.0, 4.0 / 7.0},
        {3, 1.0, 2.0 / 3.0, 0.8}},
       249.0 / 350.0},
      // C is predicted once but never gold, so it drops out of the average.
      {"predicted class without support",
       {"A", "B", "C"},
       {0, 0, 1},
       {0, 2, 1},
       {{2, 1.0, 0.5, 2.0 / 3.0}, {1, 1.0, 1.0, 1.0}, {0, 0.0, 0.0, 0.0}},
       7.0 / 9.0},
  };
}

}  // namespace nlu::testing

#endif  // NLU_TESTS_METRIC_CASES_H_
