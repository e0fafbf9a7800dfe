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

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "nlu/error.h"
#include "nlu/optimizer.h"
#include "nlu/rng.h"
#include "nlu/tape.h"
#include "nlu/tensor.h"
#include "test_util.h"

namespace nlu {
namespace {

using testing::CheckGradients;

Tensor RandomMatrix(size_t rows, size_t cols, Rng& rng) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.Uniform(-1.0, 1.0);
  return Tensor::Matrix(rows, cols, std::move(v));
}

Tensor RandomVector(size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(-1.0, 1.0);
  return Tensor::Vector(std::move(v));
}

Parameter RandomParam(const std::string& name, size_t rows, size_t cols,
                      Rng& rng) {
  return {name,
          rows == 1 ? RandomVector(cols, rng) : RandomMatrix(rows, cols, rng)};
}

TEST_CASE("rng streams are reproducible and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.NextU64() == b.NextU64());
  Rng root(7);
  Rng s1 = root.Split("dropout"), s2 = root.Split("init");
  CHECK(s1.NextU64() != s2.NextU64());
  CHECK(root.counter() == 0);
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.Uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(u.Below(7) < 7);
  }
}

TEST_CASE("matmul identity, annihilator and triple-loop oracle") {
  Rng rng(1);
  Tensor m = RandomMatrix(3, 3, rng);
  Tensor eye = Tensor::Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  CHECK(MatMul(eye, m) == m);
  Tensor zero(Shape{3, 3});
  Tensor annihilated = MatMul(m, zero);
  for (double x : annihilated.data()) CHECK(x == 0.0);

  Tensor a = RandomMatrix(3, 4, rng), b = RandomMatrix(4, 2, rng);
  Tensor c = MatMul(a, b);
  REQUIRE(c.shape() == Shape{3, 2});
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 2; ++j) {
      double s = 0.0;
      for (size_t k = 0; k < 4; ++k) s += a.at(i, k) * b.at(k, j);
      CHECK(std::abs(c.at(i, j) - s) < 1e-12);
    }
  }
  CHECK_THROWS_AS(MatMul(a, a), ShapeError);
  try {
    MatMul(a, a);
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("[3x4]") != std::string::npos);
  }
}

TEST_CASE("softmax contracts") {
  Tensor u = Softmax(Tensor::Vector({0, 0, 0}));
  for (double p : u.data()) CHECK(std::abs(p - 1.0 / 3) < 1e-15);

  Tensor s = Softmax(Tensor::Vector({1, 2, 3}));
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(std::abs(s[0] - std::exp(1.0) / z) < 1e-12);
  CHECK(std::abs(s[1] - std::exp(2.0) / z) < 1e-12);
  CHECK(std::abs(s[2] - std::exp(3.0) / z) < 1e-12);

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor v = RandomVector(6, rng);
    const double c = rng.Uniform(-50, 50);
    Tensor shifted = v;
    for (double& x : shifted.mutable_data()) x += c;
    Tensor p = Softmax(v), q = Softmax(shifted);
    double sum = 0.0;
    for (size_t i = 0; i < 6; ++i) {
      CHECK(std::abs(p[i] - q[i]) < 1e-12);
      CHECK(p[i] > 0.0);
      sum += p[i];
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(Softmax(Tensor::Vector({1, NAN})), NumericError);
  CHECK_THROWS_AS(
      Softmax(Tensor::Vector({std::numeric_limits<double>::infinity(), 0})),
      NumericError);
}

TEST_CASE("cross entropy") {
  CHECK(CrossEntropy(Tensor::Vector({0, 1, 0}), 1) == 0.0);
  std::vector<double> uniform(10, 0.1);
  CHECK(std::abs(CrossEntropy(Tensor::Vector(uniform), 3) - std::log(10.0)) <
        1e-12);
  Rng rng(9);
  Tensor p = Softmax(RandomVector(5, rng));
  for (size_t t = 0; t < 5; ++t) {
    CHECK(std::abs(CrossEntropy(p, t) + std::log(p[t])) < 1e-12);
  }
  CHECK(std::abs(CrossEntropy(Tensor::Vector({1, 0}), 1) -
                 -std::log(kLogClamp)) < 1e-9);
  CHECK_THROWS_AS(CrossEntropy(p, 5), IndexError);
}

TEST_CASE("dropout") {
  Rng rng(11);
  Tensor x = RandomVector(50, rng);
  CHECK(Dropout(x, 0.5, rng, false) == x);
  CHECK(Dropout(x, 0.0, rng, true) == x);
  CHECK_THROWS_AS(Dropout(x, 1.0, rng, true), ConfigError);

  Tensor ones(Shape{100000});
  for (double& v : ones.mutable_data()) v = 1.0;
  Tensor y = Dropout(ones, 0.3, rng, true);
  double mean = 0.0;
  for (double v : y.data()) {
    CHECK((v == 0.0 || std::abs(v - 1.0 / 0.7) < 1e-12));
    mean += v;
  }
  mean /= y.size();
  CHECK(std::abs(mean - 1.0) < 0.01);
}

TEST_CASE("argmax ties go to the lowest index") {
  const std::vector<double> v = {0.2, 0.4, 0.4};
  CHECK(Argmax(v) == 1);
}

TEST_CASE("backward: analytic cases") {
  Tape tape;
  Var x = tape.Leaf(Tensor::Vector({3.0}, true));
  Var y = tape.Mul(x, x);
  Var c = tape.Constant(Tensor::Vector({2.0}));
  Var loss = tape.Sum(std::vector<Var>{tape.Add(y, tape.Mul(c, c))});
  tape.Backward(loss);
  REQUIRE(tape.Grad(x).has_value());
  CHECK((*tape.Grad(x))[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(!tape.Grad(c).has_value());

  Tape t2;
  Var v = t2.Leaf(Tensor::Vector({1.0, 2.0}, true));
  CHECK_THROWS_AS(t2.Backward(v), ContractError);
}

TEST_CASE("backward: softmax classifier matches finite differences") {
  for (uint64_t seed : {1, 2, 3}) {
    Rng rng(seed);
    Parameter w = RandomParam("W", 5, 4, rng);
    Parameter b = RandomParam("b", 1, 5, rng);
    Tensor x = RandomVector(4, rng);
    auto build = [&](Tape& t) {
      Var logits = t.Add(t.MatVec(t.Param(w), t.Constant(x)), t.Param(b));
      return t.CrossEntropy(t.Softmax(logits), 2);
    };
    std::vector<Parameter*> params = {&w, &b};
    CHECK(CheckGradients(build, params).max_rel_error < 1e-6);
  }
}

TEST_CASE("backward: every op matches finite differences") {
  Rng rng(4);
  Parameter a = RandomParam("a", 3, 4, rng);
  Parameter m = RandomParam("m", 4, 3, rng);
  Parameter v = RandomParam("v", 1, 3, rng);
  Parameter u = RandomParam("u", 1, 3, rng);
  Parameter table = RandomParam("table", 5, 3, rng);
  auto build = [&](Tape& t) {
    Var pa = t.Param(a), pm = t.Param(m), pv = t.Param(v), pu = t.Param(u);
    Var prod = t.MatMul(pa, pm);                   // [3×3]
    Var r0 = t.Row(prod, 0), r2 = t.Row(prod, 2);  // [3]
    Var e = t.Lookup(table, 3);                    // [3]
    Var h = t.Tanh(t.Add(r0, e));
    Var g = t.Sigmoid(t.Sub(r2, pv));
    Var mix = t.Add(t.Mul(g, h), t.Mul(t.OneMinus(g), pu));
    Var cat = t.Concat({mix, t.Scale(pv, 0.5)});        // [6]
    Var part = t.Slice(cat, 1, 4);                      // [4]
    Var stacked = t.Stack(std::vector<Var>{h, g, pu});  // [3×3]
    Var weights = t.Softmax(t.Slice(part, 0, 3));
    Var pooled = t.WeightedSum(stacked, weights);  // [3]
    Var dot = t.Dot(pooled, pv);
    Var ce = t.CrossEntropy(t.Softmax(t.Add(t.MatVec(pm, pooled), part)), 1);
    return t.Sum(std::vector<Var>{dot, ce});
  };
  std::vector<Parameter*> params = {&a, &m, &v, &u, &table};
  testing::GradCheck r = CheckGradients(build, params);
  CHECK(r.checked == 12 + 12 + 3 + 3 + 15);
  CHECK(r.max_rel_error < 1e-6);

  // Only the gathered row of the table receives a gradient.
  Tape t;
  t.Backward(build(t));
  const ParamGrad& g = t.param_grads().at(&table);
  CHECK(g.sparse);
  CHECK(g.rows.size() == 1);
  CHECK(g.rows.begin()->first == 3);
}

TEST_CASE("optimizer") {
  SUBCASE("adam first step") {
    Parameter p{"p", Tensor::Vector({0.5})};
    Optimizer opt({});
    GradientMap grads;
    grads[&p].dense = {1.0};
    std::vector<Parameter*> params = {&p};
    opt.Step(params, grads);
    CHECK(opt.step_count() == 1);
    const double expected = 0.5 - 1e-3 * 1.0 / (1.0 + 1e-8);
    CHECK(std::abs(p.value[0] - expected) < 1e-15);
    CHECK(std::abs((p.value[0] - 0.5) - -9.99999e-4) < 1e-9);
  }
  SUBCASE("zero and missing gradients leave parameters unchanged") {
    Parameter p{"p", Tensor::Vector({0.5, -2.0})};
    Parameter q{"q", Tensor::Vector({1.0})};
    Optimizer opt({});
    GradientMap grads;
    grads[&p].dense = {0.0, 0.0};
    std::vector<Parameter*> params = {&p, &q};
    opt.Step(params, grads);
    CHECK(p.value == Tensor::Vector({0.5, -2.0}));
    CHECK(q.value == Tensor::Vector({1.0}));
  }
  SUBCASE("sgd") {
    Parameter p{"p", Tensor::Vector({1.0, 2.0})};
    OptimizerConfig c;
    c.kind = OptimizerKind::kSgd;
    c.learning_rate = 0.1;
    Optimizer opt(c);
    GradientMap grads;
    grads[&p].dense = {1.0, -2.0};
    std::vector<Parameter*> params = {&p};
    opt.Step(params, grads);
    CHECK(p.value[0] == doctest::Approx(0.9));
    CHECK(p.value[1] == doctest::Approx(2.2));
  }
  SUBCASE("shape mismatch") {
    Parameter p{"p", Tensor::Vector({1.0, 2.0})};
    Optimizer opt({});
    GradientMap grads;
    grads[&p].dense = {1.0};
    std::vector<Parameter*> params = {&p};
    CHECK_THROWS_AS(opt.Step(params, grads), ShapeError);
  }
  SUBCASE("deterministic") {
    auto run = [] {
      Parameter p{"p", Tensor::Vector({0.1, 0.2, 0.3})};
      Optimizer opt({});
      std::vector<Parameter*> params = {&p};
      for (int s = 0; s < 5; ++s) {
        GradientMap grads;
        grads[&p].dense = {0.3 * s, -0.1, 2.0};
        opt.Step(params, grads);
      }
      return p.value;
    };
    CHECK(run() == run());
  }
  SUBCASE("invalid config") {
    OptimizerConfig c;
    c.learning_rate = -1;
    CHECK_THROWS_AS(Optimizer{c}, ConfigError);
  }
}

}  // namespace
}  // namespace nlu
