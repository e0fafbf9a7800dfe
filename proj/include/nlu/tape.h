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

#ifndef NLU_TAPE_H_
#define NLU_TAPE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlu/tensor.h"

namespace nlu {

class Rng;
class Tape;

// A named trainable tensor owned by a model.
struct Parameter {
  std::string name;
  Tensor value;
};

// Gradient of one parameter collected by a backward pass. Embedding tables
// receive row-sparse gradients so a large vocabulary costs nothing per step.
struct ParamGrad {
  bool sparse = false;
  std::vector<double> dense;
  std::map<size_t, std::vector<double>> rows;
};

using GradientMap = std::unordered_map<const Parameter*, ParamGrad>;

using NodeId = uint32_t;

// Handle to a node on a tape.
class Var {
 public:
  Var() = default;

  NodeId id() const { return id_; }
  Tape* tape() const { return tape_; }
  bool valid() const { return tape_ != nullptr; }
  const Tensor& value() const;
  size_t size() const { return value().size(); }

 private:
  friend class Tape;
  Var(Tape* tape, NodeId id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  NodeId id_ = 0;
};

enum class Op : uint8_t {
  kLeaf,
  kParam,
  kLookup,
  kMatMul,
  kMatVec,
  kAdd,
  kSub,
  kMul,
  kScale,
  kOneMinus,
  kSigmoid,
  kTanh,
  kConcat,
  kSlice,
  kStack,
  kRow,
  kSoftmax,
  kCrossEntropy,
  kSum,
  kDot,
  kWeightedSum,
  kDropout,
};

const char* OpName(Op op);

// Reverse-mode autodiff tape. Nodes are appended in evaluation order, so
// every node's inputs precede it and a single reverse sweep is a valid
// topological backward pass. A tape is built per example and discarded.
//
// Parameters are referenced, not copied; the referenced tensors must outlive
// the tape and stay unchanged until Backward() returns.
class Tape {
 public:
  explicit Tape(bool record_grads = true) : record_grads_(record_grads) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool record_grads() const { return record_grads_; }
  size_t size() const { return nodes_.size(); }
  Op op(NodeId id) const { return nodes_[id].op; }
  std::span<const NodeId> inputs(NodeId id) const { return nodes_[id].inputs; }
  const Tensor& value(NodeId id) const;

  // Leaves. Leaf() tracks gradients when the tensor requests them.
  Var Leaf(Tensor t);
  Var Constant(Tensor t);
  // One node per parameter per tape; repeated calls return the same node.
  Var Param(const Parameter& p);
  // Row `row` of an embedding table [V×d] as a vector [d].
  Var Lookup(const Parameter& table, size_t row, bool trainable = true);

  Var MatMul(Var a, Var b);
  // W[m×n]·x[n] -> [m].
  Var MatVec(Var w, Var x);
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Mul(Var a, Var b);
  Var Scale(Var a, double c);
  // 1 − a, elementwise.
  Var OneMinus(Var a);
  Var Sigmoid(Var a);
  Var Tanh(Var a);
  Var Concat(std::span<const Var> parts);
  Var Concat(std::initializer_list<Var> parts) {
    return Concat(std::span<const Var>(parts.begin(), parts.size()));
  }
  Var Slice(Var a, size_t offset, size_t length);
  // Stacks T vectors of width n into a [T×n] matrix.
  Var Stack(std::span<const Var> rows);
  Var Row(Var matrix, size_t r);
  Var Softmax(Var logits);
  Var CrossEntropy(Var probs, size_t target);
  // Sum of scalars.
  Var Sum(std::span<const Var> terms);
  Var Dot(Var a, Var b);
  // Σₜ w[t]·X[t] for X[T×n], w[T] -> [n].
  Var WeightedSum(Var matrix, Var weights);
  Var Dropout(Var a, double rate, Rng& rng, bool training);

  // Populates gradients for every tracked ancestor of `loss`, which must be
  // a scalar node. May be called once per tape.
  void Backward(Var loss);

  // Gradient of a node after Backward(); nullopt when the node is not a
  // tracked ancestor of the loss.
  std::optional<std::span<const double>> Grad(Var v) const;

  // Parameter gradients after Backward().
  const GradientMap& param_grads() const { return param_grads_; }

 private:
  struct Node {
    Op op = Op::kLeaf;
    std::vector<NodeId> inputs;
    Tensor value;
    const Tensor* ref = nullptr;
    const Parameter* param = nullptr;
    bool requires_grad = false;
    std::vector<double> grad;
    size_t aux = 0;
    size_t aux2 = 0;
    double scalar = 0.0;
    std::vector<double> mask;
  };

  Var Push(Node node);
  bool Tracks(NodeId id) const { return nodes_[id].requires_grad; }
  bool AnyTracked(std::span<const NodeId> ids) const;
  // Zero-initialized gradient buffer of a tracked node, or nullptr.
  double* GradBuffer(NodeId id);
  void BackwardNode(NodeId id);
  void Check(Var v) const;

  bool record_grads_;
  bool backward_done_ = false;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, NodeId> param_nodes_;
  GradientMap param_grads_;
};

}  // namespace nlu

#endif  // NLU_TAPE_H_
