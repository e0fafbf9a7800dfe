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

#ifndef NLU_TESTS_TEST_UTIL_H_
#define NLU_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <regex>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "nlu/bundle.h"
#include "nlu/corpus.h"
#include "nlu/cv.h"
#include "nlu/hyper.h"
#include "nlu/metrics.h"
#include "nlu/tape.h"

namespace nlu::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(NLU_TEST_DATA_DIR) + "/" + name;
}

// Hand-annotated 50-utterance corpus, five per intent.
inline Corpus Toy50() { return ReadCorpusFile(DataPath("toy50.tsv")); }

// Small, fast hyperparameters for tests.
inline Hyper TinyHyper(uint64_t seed = 1) {
  Hyper h;
  h.seed = seed;
  h.hidden_dim = 8;
  h.attention_dim = 6;
  h.embedding_dim = 8;
  h.max_epochs = 2;
  h.patience = 2;
  return h;
}

// Rendered table with every score replaced by "N", for golden comparison.
inline std::string MaskScores(const std::string& table) {
  static const std::regex kScore("[0-9]+\\.[0-9]+");
  return std::regex_replace(table, kScore, "N");
}

inline std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A report whose pooled predictions are perfect on one example per label.
inline CvReport PerfectReport(ModelSpec spec) {
  const std::vector<std::string> labels = SpecLabels(spec);
  std::vector<size_t> gold(labels.size());
  for (size_t i = 0; i < gold.size(); ++i) gold[i] = i;
  CvReport r;
  r.task = SpecName(spec);
  r.k = 2;
  r.scores = Score(gold, gold, labels);
  return r;
}

struct GradCheck {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  size_t checked = 0;
};

// Relative error |a - n| / max(|a|, |n|, floor).
inline double RelError(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

inline constexpr double kRelFloor = 1e-4;

// Compares tape gradients of the scalar `build` w.r.t. every entry of
// `params` with central differences of step h.
inline GradCheck CheckGradients(const std::function<Var(Tape&)>& build,
                                std::span<Parameter* const> params,
                                double h = 1e-5) {
  Tape tape;
  Var loss = build(tape);
  tape.Backward(loss);
  GradCheck out;
  for (Parameter* p : params) {
    std::vector<double> analytic(p->value.size(), 0.0);
    auto it = tape.param_grads().find(p);
    if (it != tape.param_grads().end()) {
      const ParamGrad& g = it->second;
      if (g.sparse) {
        const size_t cols = p->value.cols();
        for (const auto& [row, values] : g.rows) {
          for (size_t c = 0; c < cols; ++c)
            analytic[row * cols + c] = values[c];
        }
      } else {
        analytic = g.dense;
      }
    }
    std::span<double> x = p->value.mutable_data();
    for (size_t k = 0; k < x.size(); ++k) {
      const double saved = x[k];
      x[k] = saved + h;
      Tape plus(false);
      const double f_plus = build(plus).value().data()[0];
      x[k] = saved - h;
      Tape minus(false);
      const double f_minus = build(minus).value().data()[0];
      x[k] = saved;
      const double numeric = (f_plus - f_minus) / (2 * h);
      out.max_rel_error = std::max(out.max_rel_error,
                                   RelError(analytic[k], numeric, kRelFloor));
      out.max_abs_error =
          std::max(out.max_abs_error, std::abs(analytic[k] - numeric));
      ++out.checked;
    }
  }
  return out;
}

}  // namespace nlu::testing

#endif  // NLU_TESTS_TEST_UTIL_H_
