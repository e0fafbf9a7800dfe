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

#include "nlu/tape.h"

#include <algorithm>
#include <cmath>

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {

const Tensor& Var::value() const { return tape_->value(id_); }

const char* OpName(Op op) {
  switch (op) {
    case Op::kLeaf:
      return "leaf";
    case Op::kParam:
      return "param";
    case Op::kLookup:
      return "lookup";
    case Op::kMatMul:
      return "matmul";
    case Op::kMatVec:
      return "matvec";
    case Op::kAdd:
      return "add";
    case Op::kSub:
      return "sub";
    case Op::kMul:
      return "mul";
    case Op::kScale:
      return "scale";
    case Op::kOneMinus:
      return "one_minus";
    case Op::kSigmoid:
      return "sigmoid";
    case Op::kTanh:
      return "tanh";
    case Op::kConcat:
      return "concat";
    case Op::kSlice:
      return "slice";
    case Op::kStack:
      return "stack";
    case Op::kRow:
      return "row";
    case Op::kSoftmax:
      return "softmax";
    case Op::kCrossEntropy:
      return "cross_entropy";
    case Op::kSum:
      return "sum";
    case Op::kDot:
      return "dot";
    case Op::kWeightedSum:
      return "weighted_sum";
    case Op::kDropout:
      return "dropout";
  }
  return "unknown";
}

const Tensor& Tape::value(NodeId id) const {
  const Node& n = nodes_[id];
  return n.ref != nullptr ? *n.ref : n.value;
}

void Tape::Check(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) {
    throw ContractError("variable does not belong to this tape");
  }
}

bool Tape::AnyTracked(std::span<const NodeId> ids) const {
  return std::any_of(ids.begin(), ids.end(),
                     [this](NodeId id) { return Tracks(id); });
}

Var Tape::Push(Node node) {
  if (backward_done_) {
    throw ContractError("cannot extend a tape after its backward pass");
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<NodeId>(nodes_.size() - 1));
}

Var Tape::Leaf(Tensor t) {
  Node n;
  n.op = Op::kLeaf;
  n.requires_grad = record_grads_ && t.requires_grad();
  n.value = std::move(t);
  return Push(std::move(n));
}

Var Tape::Constant(Tensor t) {
  t.set_requires_grad(false);
  return Leaf(std::move(t));
}

Var Tape::Param(const Parameter& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var(this, it->second);
  Node n;
  n.op = Op::kParam;
  n.ref = &p.value;
  n.param = &p;
  n.requires_grad = record_grads_;
  Var v = Push(std::move(n));
  param_nodes_.emplace(&p, v.id());
  return v;
}

Var Tape::Lookup(const Parameter& table, size_t row, bool trainable) {
  const Tensor& t = table.value;
  if (t.rank() != 2) {
    throw ShapeError("lookup table must be a matrix, got " +
                     ShapeString(t.shape()));
  }
  if (row >= t.rows()) {
    throw IndexError("embedding index " + std::to_string(row) +
                     " out of range for " + std::to_string(t.rows()) + " rows");
  }
  auto r = t.row(row);
  Node n;
  n.op = Op::kLookup;
  n.value = Tensor::Vector(std::vector<double>(r.begin(), r.end()));
  n.param = &table;
  n.aux = row;
  n.requires_grad = record_grads_ && trainable;
  return Push(std::move(n));
}

Var Tape::MatMul(Var a, Var b) {
  Check(a);
  Check(b);
  Node n;
  n.op = Op::kMatMul;
  n.value = nlu::MatMul(a.value(), b.value());
  n.inputs = {a.id(), b.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::MatVec(Var w, Var x) {
  Check(w);
  Check(x);
  const Tensor& wt = w.value();
  const Tensor& xt = x.value();
  if (wt.rank() != 2 || xt.rank() != 1 || wt.shape()[1] != xt.size()) {
    throw ShapeError("matvec shapes do not match: " + ShapeString(wt.shape()) +
                     " x " + ShapeString(xt.shape()));
  }
  const size_t m = wt.shape()[0];
  const size_t k = wt.shape()[1];
  std::vector<double> out(m, 0.0);
  const double* pw = wt.data().data();
  const double* px = xt.data().data();
  for (size_t i = 0; i < m; ++i) {
    const double* wr = pw + i * k;
    double acc = 0.0;
    for (size_t j = 0; j < k; ++j) acc += wr[j] * px[j];
    out[i] = acc;
  }
  Node n;
  n.op = Op::kMatVec;
  n.value = Tensor::Vector(std::move(out));
  n.inputs = {w.id(), x.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

namespace {

void RequireSameShape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + " shapes differ: " +
                     ShapeString(a.shape()) + " vs " + ShapeString(b.shape()));
  }
}

}  // namespace

Var Tape::Add(Var a, Var b) {
  Check(a);
  Check(b);
  RequireSameShape(a.value(), b.value(), "add");
  Tensor out = a.value();
  out.set_requires_grad(false);
  auto o = out.mutable_data();
  auto bv = b.value().data();
  for (size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
  Node n;
  n.op = Op::kAdd;
  n.value = std::move(out);
  n.inputs = {a.id(), b.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Sub(Var a, Var b) {
  Check(a);
  Check(b);
  RequireSameShape(a.value(), b.value(), "sub");
  Tensor out = a.value();
  out.set_requires_grad(false);
  auto o = out.mutable_data();
  auto bv = b.value().data();
  for (size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  Node n;
  n.op = Op::kSub;
  n.value = std::move(out);
  n.inputs = {a.id(), b.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Mul(Var a, Var b) {
  Check(a);
  Check(b);
  RequireSameShape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  out.set_requires_grad(false);
  auto o = out.mutable_data();
  auto bv = b.value().data();
  for (size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
  Node n;
  n.op = Op::kMul;
  n.value = std::move(out);
  n.inputs = {a.id(), b.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Scale(Var a, double c) {
  Check(a);
  Tensor out = a.value();
  out.set_requires_grad(false);
  for (double& v : out.mutable_data()) v *= c;
  Node n;
  n.op = Op::kScale;
  n.value = std::move(out);
  n.inputs = {a.id()};
  n.scalar = c;
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::OneMinus(Var a) {
  Check(a);
  Tensor out = a.value();
  out.set_requires_grad(false);
  for (double& v : out.mutable_data()) v = 1.0 - v;
  Node n;
  n.op = Op::kOneMinus;
  n.value = std::move(out);
  n.inputs = {a.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Sigmoid(Var a) {
  Check(a);
  Tensor out = a.value();
  out.set_requires_grad(false);
  for (double& v : out.mutable_data()) {
    v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                 : std::exp(v) / (1.0 + std::exp(v));
  }
  Node n;
  n.op = Op::kSigmoid;
  n.value = std::move(out);
  n.inputs = {a.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Tanh(Var a) {
  Check(a);
  Tensor out = a.value();
  out.set_requires_grad(false);
  for (double& v : out.mutable_data()) v = std::tanh(v);
  Node n;
  n.op = Op::kTanh;
  n.value = std::move(out);
  n.inputs = {a.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Concat(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat needs at least one input");
  std::vector<double> out;
  Node n;
  for (const Var& p : parts) {
    Check(p);
    if (p.value().rank() != 1) {
      throw ShapeError("concat expects vectors, got " +
                       ShapeString(p.value().shape()));
    }
    auto d = p.value().data();
    out.insert(out.end(), d.begin(), d.end());
    n.inputs.push_back(p.id());
  }
  n.op = Op::kConcat;
  n.value = Tensor::Vector(std::move(out));
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Slice(Var a, size_t offset, size_t length) {
  Check(a);
  const Tensor& t = a.value();
  if (t.rank() != 1 || length == 0 || offset + length > t.size()) {
    throw ShapeError("slice [" + std::to_string(offset) + ", +" +
                     std::to_string(length) + ") out of bounds for " +
                     ShapeString(t.shape()));
  }
  auto d = t.data().subspan(offset, length);
  Node n;
  n.op = Op::kSlice;
  n.value = Tensor::Vector(std::vector<double>(d.begin(), d.end()));
  n.inputs = {a.id()};
  n.aux = offset;
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Stack(std::span<const Var> rows) {
  if (rows.empty()) throw ContractError("stack needs at least one row");
  const size_t width = rows.front().value().size();
  std::vector<double> out;
  out.reserve(width * rows.size());
  Node n;
  for (const Var& r : rows) {
    Check(r);
    if (r.value().rank() != 1 || r.value().size() != width) {
      throw ShapeError("stack rows must be vectors of equal width");
    }
    auto d = r.value().data();
    out.insert(out.end(), d.begin(), d.end());
    n.inputs.push_back(r.id());
  }
  n.op = Op::kStack;
  n.value = Tensor::Matrix(rows.size(), width, std::move(out));
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Row(Var matrix, size_t r) {
  Check(matrix);
  const Tensor& t = matrix.value();
  if (t.rank() != 2 || r >= t.rows()) {
    throw IndexError("row " + std::to_string(r) + " out of range for " +
                     ShapeString(t.shape()));
  }
  auto d = t.row(r);
  Node n;
  n.op = Op::kRow;
  n.value = Tensor::Vector(std::vector<double>(d.begin(), d.end()));
  n.inputs = {matrix.id()};
  n.aux = r;
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Softmax(Var logits) {
  Check(logits);
  Node n;
  n.op = Op::kSoftmax;
  n.value = nlu::Softmax(logits.value());
  n.inputs = {logits.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::CrossEntropy(Var probs, size_t target) {
  Check(probs);
  Node n;
  n.op = Op::kCrossEntropy;
  n.value = Tensor::Scalar(nlu::CrossEntropy(probs.value(), target));
  n.inputs = {probs.id()};
  n.aux = target;
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Sum(std::span<const Var> terms) {
  if (terms.empty()) throw ContractError("sum needs at least one term");
  double total = 0.0;
  Node n;
  for (const Var& t : terms) {
    Check(t);
    if (t.value().size() != 1) {
      throw ShapeError("sum expects scalars, got " +
                       ShapeString(t.value().shape()));
    }
    total += t.value()[0];
    n.inputs.push_back(t.id());
  }
  n.op = Op::kSum;
  n.value = Tensor::Scalar(total);
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Dot(Var a, Var b) {
  Check(a);
  Check(b);
  RequireSameShape(a.value(), b.value(), "dot");
  auto av = a.value().data();
  auto bv = b.value().data();
  double acc = 0.0;
  for (size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
  Node n;
  n.op = Op::kDot;
  n.value = Tensor::Scalar(acc);
  n.inputs = {a.id(), b.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::WeightedSum(Var matrix, Var weights) {
  Check(matrix);
  Check(weights);
  const Tensor& m = matrix.value();
  const Tensor& w = weights.value();
  if (m.rank() != 2 || w.rank() != 1 || w.size() != m.rows()) {
    throw ShapeError(
        "weighted sum shapes do not match: " + ShapeString(m.shape()) +
        " with weights " + ShapeString(w.shape()));
  }
  const size_t width = m.cols();
  std::vector<double> out(width, 0.0);
  for (size_t t = 0; t < m.rows(); ++t) {
    auto r = m.row(t);
    for (size_t j = 0; j < width; ++j) out[j] += w[t] * r[j];
  }
  Node n;
  n.op = Op::kWeightedSum;
  n.value = Tensor::Vector(std::move(out));
  n.inputs = {matrix.id(), weights.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

Var Tape::Dropout(Var a, double rate, Rng& rng, bool training) {
  Check(a);
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " +
                      std::to_string(rate));
  }
  if (!training || rate == 0.0) return a;
  const Tensor& x = a.value();
  Node n;
  n.op = Op::kDropout;
  n.mask.resize(x.size());
  const double scale = 1.0 / (1.0 - rate);
  Tensor out(x.shape());
  auto o = out.mutable_data();
  for (size_t i = 0; i < x.size(); ++i) {
    n.mask[i] = rng.Uniform() < rate ? 0.0 : scale;
    o[i] = x[i] * n.mask[i];
  }
  n.value = std::move(out);
  n.inputs = {a.id()};
  n.requires_grad = AnyTracked(n.inputs);
  return Push(std::move(n));
}

double* Tape::GradBuffer(NodeId id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  if (n.grad.empty()) n.grad.assign(value(id).size(), 0.0);
  return n.grad.data();
}

void Tape::Backward(Var loss) {
  Check(loss);
  if (backward_done_) throw ContractError("backward already ran on this tape");
  if (loss.value().size() != 1) {
    throw ContractError("backward needs a scalar loss, got shape " +
                        ShapeString(loss.value().shape()));
  }
  backward_done_ = true;
  if (!Tracks(loss.id())) return;
  GradBuffer(loss.id())[0] = 1.0;
  for (NodeId id = loss.id() + 1; id-- > 0;) {
    if (!nodes_[id].grad.empty()) BackwardNode(id);
  }
}

std::optional<std::span<const double>> Tape::Grad(Var v) const {
  Check(v);
  const Node& n = nodes_[v.id()];
  if (n.grad.empty()) return std::nullopt;
  return std::span<const double>(n.grad);
}

void Tape::BackwardNode(NodeId id) {
  Node& n = nodes_[id];
  const std::vector<double>& dy = n.grad;
  switch (n.op) {
    case Op::kLeaf:
      return;
    case Op::kParam: {
      ParamGrad& pg = param_grads_[n.param];
      pg.sparse = false;
      if (pg.dense.empty()) pg.dense.assign(dy.size(), 0.0);
      for (size_t i = 0; i < dy.size(); ++i) pg.dense[i] += dy[i];
      return;
    }
    case Op::kLookup: {
      ParamGrad& pg = param_grads_[n.param];
      pg.sparse = true;
      auto& row = pg.rows[n.aux];
      if (row.empty()) row.assign(dy.size(), 0.0);
      for (size_t i = 0; i < dy.size(); ++i) row[i] += dy[i];
      return;
    }
    case Op::kMatMul: {
      const Tensor& a = value(n.inputs[0]);
      const Tensor& b = value(n.inputs[1]);
      const size_t m = a.shape()[0];
      const size_t k = a.shape()[1];
      const size_t cols = b.rank() == 1 ? 1 : b.shape()[1];
      if (double* da = GradBuffer(n.inputs[0])) {
        // dA = dC·Bᵀ
        for (size_t i = 0; i < m; ++i)
          for (size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (size_t j = 0; j < cols; ++j)
              acc += dy[i * cols + j] * b[p * cols + j];
            da[i * k + p] += acc;
          }
      }
      if (double* db = GradBuffer(n.inputs[1])) {
        // dB = Aᵀ·dC
        for (size_t i = 0; i < m; ++i)
          for (size_t p = 0; p < k; ++p) {
            const double av = a[i * k + p];
            for (size_t j = 0; j < cols; ++j)
              db[p * cols + j] += av * dy[i * cols + j];
          }
      }
      return;
    }
    case Op::kMatVec: {
      const Tensor& w = value(n.inputs[0]);
      const Tensor& x = value(n.inputs[1]);
      const size_t m = w.shape()[0];
      const size_t k = w.shape()[1];
      if (double* dw = GradBuffer(n.inputs[0])) {
        for (size_t i = 0; i < m; ++i) {
          const double g = dy[i];
          if (g == 0.0) continue;
          double* row = dw + i * k;
          for (size_t j = 0; j < k; ++j) row[j] += g * x[j];
        }
      }
      if (double* dx = GradBuffer(n.inputs[1])) {
        const double* pw = w.data().data();
        for (size_t i = 0; i < m; ++i) {
          const double g = dy[i];
          if (g == 0.0) continue;
          const double* row = pw + i * k;
          for (size_t j = 0; j < k; ++j) dx[j] += g * row[j];
        }
      }
      return;
    }
    case Op::kAdd:
    case Op::kSub: {
      const double sign = n.op == Op::kAdd ? 1.0 : -1.0;
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) da[i] += dy[i];
      if (double* db = GradBuffer(n.inputs[1]))
        for (size_t i = 0; i < dy.size(); ++i) db[i] += sign * dy[i];
      return;
    }
    case Op::kMul: {
      const Tensor& a = value(n.inputs[0]);
      const Tensor& b = value(n.inputs[1]);
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * b[i];
      if (double* db = GradBuffer(n.inputs[1]))
        for (size_t i = 0; i < dy.size(); ++i) db[i] += dy[i] * a[i];
      return;
    }
    case Op::kScale: {
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) da[i] += n.scalar * dy[i];
      return;
    }
    case Op::kOneMinus: {
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) da[i] -= dy[i];
      return;
    }
    case Op::kSigmoid: {
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) {
          const double s = n.value[i];
          da[i] += dy[i] * s * (1.0 - s);
        }
      return;
    }
    case Op::kTanh: {
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) {
          const double t = n.value[i];
          da[i] += dy[i] * (1.0 - t * t);
        }
      return;
    }
    case Op::kConcat:
    case Op::kStack: {
      size_t offset = 0;
      for (NodeId in : n.inputs) {
        const size_t len = value(in).size();
        if (double* d = GradBuffer(in))
          for (size_t i = 0; i < len; ++i) d[i] += dy[offset + i];
        offset += len;
      }
      return;
    }
    case Op::kSlice: {
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) da[n.aux + i] += dy[i];
      return;
    }
    case Op::kRow: {
      if (double* da = GradBuffer(n.inputs[0])) {
        const size_t width = dy.size();
        for (size_t i = 0; i < width; ++i) da[n.aux * width + i] += dy[i];
      }
      return;
    }
    case Op::kSoftmax: {
      if (double* da = GradBuffer(n.inputs[0])) {
        double dot = 0.0;
        for (size_t i = 0; i < dy.size(); ++i) dot += dy[i] * n.value[i];
        for (size_t i = 0; i < dy.size(); ++i)
          da[i] += n.value[i] * (dy[i] - dot);
      }
      return;
    }
    case Op::kCrossEntropy: {
      if (double* dp = GradBuffer(n.inputs[0])) {
        const double p = value(n.inputs[0])[n.aux];
        if (p > kLogClamp) dp[n.aux] -= dy[0] / p;
      }
      return;
    }
    case Op::kSum: {
      for (NodeId in : n.inputs)
        if (double* d = GradBuffer(in)) d[0] += dy[0];
      return;
    }
    case Op::kDot: {
      const Tensor& a = value(n.inputs[0]);
      const Tensor& b = value(n.inputs[1]);
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < a.size(); ++i) da[i] += dy[0] * b[i];
      if (double* db = GradBuffer(n.inputs[1]))
        for (size_t i = 0; i < b.size(); ++i) db[i] += dy[0] * a[i];
      return;
    }
    case Op::kWeightedSum: {
      const Tensor& m = value(n.inputs[0]);
      const Tensor& w = value(n.inputs[1]);
      const size_t width = m.cols();
      if (double* dm = GradBuffer(n.inputs[0]))
        for (size_t t = 0; t < m.rows(); ++t)
          for (size_t j = 0; j < width; ++j) dm[t * width + j] += w[t] * dy[j];
      if (double* dw = GradBuffer(n.inputs[1]))
        for (size_t t = 0; t < m.rows(); ++t) {
          auto r = m.row(t);
          double acc = 0.0;
          for (size_t j = 0; j < width; ++j) acc += r[j] * dy[j];
          dw[t] += acc;
        }
      return;
    }
    case Op::kDropout: {
      if (double* da = GradBuffer(n.inputs[0]))
        for (size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * n.mask[i];
      return;
    }
  }
}

}  // namespace nlu
