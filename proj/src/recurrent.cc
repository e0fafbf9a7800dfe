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

#include "nlu/recurrent.h"

#include <cmath>

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {

const char* CellKindName(CellKind kind) {
  return kind == CellKind::kLstm ? "lstm" : "gru";
}

CellKind ParseCellKind(const std::string& name) {
  if (name == "lstm") return CellKind::kLstm;
  if (name == "gru") return CellKind::kGru;
  throw ConfigError("unknown cell kind '" + name + "' (expected lstm or gru)");
}

Parameter InitMatrix(const std::string& name, size_t rows, size_t cols,
                     Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(cols));
  Tensor t({rows, cols});
  for (double& v : t.mutable_data()) v = rng.Uniform(-bound, bound);
  return {name, std::move(t)};
}

CellParams CellParams::Init(CellKind kind, size_t input_dim, size_t hidden_dim,
                            Rng& rng, const std::string& prefix) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw ConfigError("cell dimensions must be positive");
  }
  static constexpr const char* kLstmGates[] = {"i", "f", "g", "o"};
  static constexpr const char* kGruGates[] = {"z", "r", "h"};
  CellParams p;
  p.kind = kind;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  for (size_t g = 0; g < p.gate_count(); ++g) {
    const std::string gate =
        kind == CellKind::kLstm ? kLstmGates[g] : kGruGates[g];
    p.weights.push_back(InitMatrix(prefix + ".W_" + gate, hidden_dim,
                                   input_dim + hidden_dim, rng));
    Tensor bias({hidden_dim});
    if (kind == CellKind::kLstm && g == 1) {
      for (double& v : bias.mutable_data()) v = 1.0;
    }
    p.biases.push_back({prefix + ".b_" + gate, std::move(bias)});
  }
  return p;
}

std::vector<Parameter*> CellParams::parameters() {
  std::vector<Parameter*> out;
  for (size_t g = 0; g < weights.size(); ++g) {
    out.push_back(&weights[g]);
    out.push_back(&biases[g]);
  }
  return out;
}

std::vector<const Parameter*> CellParams::parameters() const {
  std::vector<const Parameter*> out;
  for (size_t g = 0; g < weights.size(); ++g) {
    out.push_back(&weights[g]);
    out.push_back(&biases[g]);
  }
  return out;
}

namespace {

void CheckDims(const CellParams& p, CellKind kind, Var x, Var h) {
  if (p.kind != kind) {
    throw ContractError(std::string("expected ") + CellKindName(kind) +
                        " parameters, got " + CellKindName(p.kind));
  }
  if (x.size() != p.input_dim || h.size() != p.hidden_dim) {
    throw ShapeError("cell expects input " + std::to_string(p.input_dim) +
                     " and hidden " + std::to_string(p.hidden_dim) + ", got " +
                     ShapeString(x.value().shape()) + " and " +
                     ShapeString(h.value().shape()));
  }
}

Var Gate(Tape& tape, const CellParams& p, size_t g, Var xh) {
  return tape.Add(tape.MatVec(tape.Param(p.weights[g]), xh),
                  tape.Param(p.biases[g]));
}

Var Zeros(Tape& tape, size_t n) { return tape.Constant(Tensor({n})); }

}  // namespace

LstmState LstmStep(Tape& tape, Var x, Var h_prev, Var c_prev,
                   const CellParams& p) {
  CheckDims(p, CellKind::kLstm, x, h_prev);
  if (c_prev.size() != p.hidden_dim) {
    throw ShapeError("cell state has width " + std::to_string(c_prev.size()) +
                     ", expected " + std::to_string(p.hidden_dim));
  }
  Var xh = tape.Concat({x, h_prev});
  Var i = tape.Sigmoid(Gate(tape, p, 0, xh));
  Var f = tape.Sigmoid(Gate(tape, p, 1, xh));
  Var g = tape.Tanh(Gate(tape, p, 2, xh));
  Var o = tape.Sigmoid(Gate(tape, p, 3, xh));
  Var c = tape.Add(tape.Mul(f, c_prev), tape.Mul(i, g));
  Var h = tape.Mul(o, tape.Tanh(c));
  return {h, c};
}

Var GruStep(Tape& tape, Var x, Var h_prev, const CellParams& p) {
  CheckDims(p, CellKind::kGru, x, h_prev);
  Var xh = tape.Concat({x, h_prev});
  Var z = tape.Sigmoid(Gate(tape, p, 0, xh));
  Var r = tape.Sigmoid(Gate(tape, p, 1, xh));
  Var candidate =
      tape.Tanh(Gate(tape, p, 2, tape.Concat({x, tape.Mul(r, h_prev)})));
  return tape.Add(tape.Mul(tape.OneMinus(z), h_prev), tape.Mul(z, candidate));
}

std::vector<Var> Unroll(Tape& tape, std::span<const Var> xs,
                        const CellParams& p, bool reverse) {
  if (xs.empty()) throw ContractError("cannot encode an empty sequence");
  const size_t n = xs.size();
  std::vector<Var> out(n);
  Var h = Zeros(tape, p.hidden_dim);
  Var c = p.kind == CellKind::kLstm ? Zeros(tape, p.hidden_dim) : Var();
  for (size_t step = 0; step < n; ++step) {
    const size_t t = reverse ? n - 1 - step : step;
    if (p.kind == CellKind::kLstm) {
      LstmState s = LstmStep(tape, xs[t], h, c, p);
      h = s.h;
      c = s.c;
    } else {
      h = GruStep(tape, xs[t], h, p);
    }
    out[t] = h;
  }
  return out;
}

std::vector<Var> BiEncode(Tape& tape, std::span<const Var> xs,
                          const CellParams& fwd, const CellParams& bwd) {
  std::vector<Var> f = Unroll(tape, xs, fwd, /*reverse=*/false);
  std::vector<Var> b = Unroll(tape, xs, bwd, /*reverse=*/true);
  std::vector<Var> out;
  out.reserve(xs.size());
  for (size_t t = 0; t < xs.size(); ++t)
    out.push_back(tape.Concat({f[t], b[t]}));
  return out;
}

AttentionParams AttentionParams::Init(size_t input_width, size_t attention_dim,
                                      Rng& rng) {
  if (input_width == 0 || attention_dim == 0) {
    throw ConfigError("attention dimensions must be positive");
  }
  AttentionParams p;
  p.projection = InitMatrix("attention.W", attention_dim, input_width, rng);
  const double bound = std::sqrt(1.0 / static_cast<double>(attention_dim));
  Tensor u({attention_dim});
  for (double& v : u.mutable_data()) v = rng.Uniform(-bound, bound);
  p.context = {"attention.u", std::move(u)};
  return p;
}

Pooled AttentionPool(Tape& tape, std::span<const Var> hs,
                     const AttentionParams& p) {
  if (hs.empty()) throw ContractError("cannot pool an empty sequence");
  Var w = tape.Param(p.projection);
  Var u = tape.Param(p.context);
  std::vector<Var> scores;
  scores.reserve(hs.size());
  for (const Var& h : hs) {
    if (h.size() != p.input_width()) {
      throw ShapeError("attention expects width " +
                       std::to_string(p.input_width()) + ", got " +
                       std::to_string(h.size()));
    }
    scores.push_back(tape.Dot(u, tape.Tanh(tape.MatVec(w, h))));
  }
  Var weights = tape.Softmax(tape.Concat(scores));
  Var context = tape.WeightedSum(tape.Stack(hs), weights);
  return {context, weights};
}

}  // namespace nlu
