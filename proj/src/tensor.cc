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

#include "nlu/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {
namespace {

size_t Product(const Shape& shape) {
  size_t n = 1;
  for (size_t d : shape) {
    if (d == 0)
      throw ShapeError("tensor dimensions must be positive, got " +
                       ShapeString(shape));
    n *= d;
  }
  return n;
}

}  // namespace

std::string ShapeString(const Shape& shape) {
  std::string out = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape, bool requires_grad)
    : shape_(std::move(shape)), requires_grad_(requires_grad) {
  if (shape_.empty()) throw ShapeError("tensor shape must have a dimension");
  data_.assign(Product(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad)
    : shape_(std::move(shape)),
      data_(std::move(data)),
      requires_grad_(requires_grad) {
  if (shape_.empty()) throw ShapeError("tensor shape must have a dimension");
  if (Product(shape_) != data_.size()) {
    throw ShapeError("shape " + ShapeString(shape_) + " does not hold " +
                     std::to_string(data_.size()) + " values");
  }
}

Tensor Tensor::Vector(std::vector<double> data, bool requires_grad) {
  size_t n = data.size();
  return Tensor({n}, std::move(data), requires_grad);
}

Tensor Tensor::Matrix(size_t rows, size_t cols, std::vector<double> data,
                      bool requires_grad) {
  return Tensor({rows, cols}, std::move(data), requires_grad);
}

Tensor Tensor::Scalar(double value, bool requires_grad) {
  return Tensor({1}, {value}, requires_grad);
}

size_t Tensor::rows() const { return shape_.size() == 1 ? 1 : shape_[0]; }

size_t Tensor::cols() const {
  return shape_.size() == 1 ? shape_[0] : data_.size() / shape_[0];
}

std::span<const double> Tensor::row(size_t r) const {
  size_t c = cols();
  return std::span<const double>(data_).subspan(r * c, c);
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() > 2) {
    throw ShapeError("matmul expects a matrix times a matrix or vector, got " +
                     ShapeString(a.shape()) + " and " + ShapeString(b.shape()));
  }
  const size_t m = a.shape()[0];
  const size_t k = a.shape()[1];
  const size_t bk = b.shape()[0];
  const size_t n = b.rank() == 1 ? 1 : b.shape()[1];
  if (k != bk) {
    throw ShapeError("matmul inner dimensions differ: " +
                     ShapeString(a.shape()) + " x " + ShapeString(b.shape()));
  }
  Tensor c(b.rank() == 1 ? Shape{m} : Shape{m, n});
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.mutable_data().data();
  for (size_t i = 0; i < m; ++i) {
    for (size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      if (av == 0.0) continue;
      const double* brow = pb + p * n;
      double* crow = pc + i * n;
      for (size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Tensor Softmax(const Tensor& logits) {
  if (logits.rank() != 1) {
    throw ShapeError("softmax expects a vector, got " +
                     ShapeString(logits.shape()));
  }
  auto in = logits.data();
  for (double v : in) {
    if (!std::isfinite(v)) throw NumericError("softmax input is not finite");
  }
  const double max = *std::max_element(in.begin(), in.end());
  Tensor out(logits.shape());
  auto o = out.mutable_data();
  double sum = 0.0;
  for (size_t i = 0; i < in.size(); ++i) {
    o[i] = std::exp(in[i] - max);
    sum += o[i];
  }
  for (double& v : o) v /= sum;
  return out;
}

double CrossEntropy(const Tensor& probs, size_t target) {
  if (target >= probs.size()) {
    throw IndexError("cross-entropy target " + std::to_string(target) +
                     " out of range for " + std::to_string(probs.size()) +
                     " classes");
  }
  return -std::log(std::max(probs[target], kLogClamp));
}

Tensor Dropout(const Tensor& x, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " +
                      std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  Tensor out(x.shape());
  const double scale = 1.0 / (1.0 - rate);
  auto in = x.data();
  auto o = out.mutable_data();
  for (size_t i = 0; i < in.size(); ++i) {
    o[i] = rng.Uniform() < rate ? 0.0 : in[i] * scale;
  }
  return out;
}

size_t Argmax(std::span<const double> values) {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace nlu
