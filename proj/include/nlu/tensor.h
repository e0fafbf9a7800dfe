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

#ifndef NLU_TENSOR_H_
#define NLU_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlu {

class Rng;

using Shape = std::vector<size_t>;

std::string ShapeString(const Shape& shape);

// Dense row-major f64 array. The shape is fixed at construction; the values
// may be mutated in place (parameters are updated by the optimizer).
class Tensor {
 public:
  Tensor() = default;
  // Zero-filled tensor.
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor Vector(std::vector<double> data, bool requires_grad = false);
  static Tensor Matrix(size_t rows, size_t cols, std::vector<double> data,
                       bool requires_grad = false);
  static Tensor Scalar(double value, bool requires_grad = false);

  const Shape& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool requires_grad() const { return requires_grad_; }
  void set_requires_grad(bool value) { requires_grad_ = value; }

  // Rank-2 accessors. A rank-1 tensor is treated as a single row.
  size_t rows() const;
  size_t cols() const;

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double operator[](size_t i) const { return data_[i]; }
  double& operator[](size_t i) { return data_[i]; }
  double at(size_t r, size_t c) const { return data_[r * cols() + c]; }
  double& at(size_t r, size_t c) { return data_[r * cols() + c]; }

  std::span<const double> row(size_t r) const;

  bool operator==(const Tensor& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
  bool requires_grad_ = false;
};

// Plain (untracked) kernels. The tape operations in tape.h reuse them.

// C = A·B for A[m×k], B[k×n]. A rank-1 right operand is a column vector.
Tensor MatMul(const Tensor& a, const Tensor& b);

// Numerically stable softmax over a rank-1 tensor.
Tensor Softmax(const Tensor& logits);

// −ln(max(probs[target], 1e-12)).
double CrossEntropy(const Tensor& probs, size_t target);

// Inverted dropout. Identity when !training or rate == 0.
Tensor Dropout(const Tensor& x, double rate, Rng& rng, bool training);

// Index of the largest entry; ties resolve to the lowest index.
size_t Argmax(std::span<const double> values);

inline constexpr double kLogClamp = 1e-12;

}  // namespace nlu

#endif  // NLU_TENSOR_H_
