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

#ifndef NLU_RECURRENT_H_
#define NLU_RECURRENT_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlu/tape.h"

namespace nlu {

class Rng;

enum class CellKind { kLstm, kGru };

const char* CellKindName(CellKind kind);
CellKind ParseCellKind(const std::string& name);

// Gate weights of one recurrent cell. Every gate has a weight matrix
// [hidden × (input + hidden)] applied to [x; h] and a bias [hidden].
// LSTM gate order: input, forget, candidate, output. GRU: update, reset,
// candidate.
struct CellParams {
  CellKind kind = CellKind::kLstm;
  size_t input_dim = 0;
  size_t hidden_dim = 0;
  std::vector<Parameter> weights;
  std::vector<Parameter> biases;

  // Uniform(±sqrt(1/fan_in)) weights, zero biases, LSTM forget bias 1.
  static CellParams Init(CellKind kind, size_t input_dim, size_t hidden_dim,
                         Rng& rng, const std::string& prefix);

  size_t gate_count() const { return kind == CellKind::kLstm ? 4 : 3; }
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
};

struct LstmState {
  Var h;
  Var c;
};

// i, f, o = σ(W[x;h] + b); g = tanh(W[x;h] + b); c = f⊙c' + i⊙g;
// h = o⊙tanh(c).
LstmState LstmStep(Tape& tape, Var x, Var h_prev, Var c_prev,
                   const CellParams& p);

// z, r = σ(W[x;h] + b); h̃ = tanh(W[x; r⊙h] + b); h = (1−z)⊙h + z⊙h̃.
Var GruStep(Tape& tape, Var x, Var h_prev, const CellParams& p);

// Runs the cell over xs from a zero state and returns every hidden state.
// reverse=true walks right to left; outputs stay aligned with the input.
std::vector<Var> Unroll(Tape& tape, std::span<const Var> xs,
                        const CellParams& p, bool reverse);

// Row t of the result is concat(forward h[t], backward h[t]), width 2H.
std::vector<Var> BiEncode(Tape& tape, std::span<const Var> xs,
                          const CellParams& fwd, const CellParams& bwd);

// Learned-context additive attention: scores u·tanh(W·h_t).
struct AttentionParams {
  Parameter projection;  // [a × 2H]
  Parameter context;     // [a]

  static AttentionParams Init(size_t input_width, size_t attention_dim,
                              Rng& rng);
  size_t attention_dim() const { return context.value.size(); }
  size_t input_width() const { return projection.value.cols(); }
  std::vector<Parameter*> parameters() { return {&projection, &context}; }
  std::vector<const Parameter*> parameters() const {
    return {&projection, &context};
  }
};

struct Pooled {
  Var context;  // [2H]
  Var weights;  // [T], sums to 1
};

Pooled AttentionPool(Tape& tape, std::span<const Var> hs,
                     const AttentionParams& p);

// Uniform(±sqrt(1/fan_in)) matrix [rows × cols].
Parameter InitMatrix(const std::string& name, size_t rows, size_t cols,
                     Rng& rng);

}  // namespace nlu

#endif  // NLU_RECURRENT_H_
