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

#include "nlu/embeddings.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "nlu/error.h"
#include "nlu/rng.h"
#include "nlu/tape.h"
#include "test_util.h"

namespace nlu {
namespace {

constexpr char kToyVectors[] =
    "stop 1 2 3 4\n"
    "car 0.5 -0.5 0.25 0\n"
    "park -1 0 1 2\n";

LoadedVectors LoadString(const std::string& text, size_t dim,
                         uint64_t seed = 1) {
  std::istringstream in(text);
  Rng rng(seed);
  return LoadVectors(in, dim, rng);
}

TEST_CASE("vocab reserves pad, unk, bou and eou") {
  Vocab v;
  CHECK(v.size() == Vocab::kReserved);
  CHECK(v.Token(Vocab::kPad) == "<pad>");
  CHECK(v.Token(Vocab::kUnk) == "<unk>");
  CHECK(v.Token(Vocab::kBou) == "<bou>");
  CHECK(v.Token(Vocab::kEou) == "<eou>");
  auto [idx, inserted] = v.Add("Stop");
  CHECK(inserted);
  CHECK(idx == 4);
  CHECK(v.Index("stop") == 4);
  CHECK(v.Index("STOP") == 4);
  CHECK(v.Index("zzqx") == Vocab::kUnk);
  CHECK(!v.Add("stop").second);
  CHECK(Vocab::FromTokens(v.tokens()) == v);
  std::vector<std::string> bad = {"<pad>", "<unk>", "x", "<eou>"};
  CHECK_THROWS_AS(Vocab::FromTokens(bad), Error);
}

TEST_CASE("load vectors: toy file") {
  LoadedVectors lv = LoadString(kToyVectors, 4);
  CHECK(lv.vocab.size() == 7);
  CHECK(lv.embeddings.table.value.shape() == Shape{7, 4});
  CHECK(lv.embeddings.dim == 4);
  CHECK(lv.vocab.Index("stop") == 4);
  CHECK(lv.vocab.Index("car") == 5);
  CHECK(lv.vocab.Index("park") == 6);
  const Tensor& t = lv.embeddings.table.value;
  for (size_t j = 0; j < 4; ++j) {
    CHECK(t.at(Vocab::kPad, j) == 0.0);
    const double mean = (t.at(4, j) + t.at(5, j) + t.at(6, j)) / 3.0;
    CHECK(std::abs(t.at(Vocab::kUnk, j) - mean) < 1e-15);
  }
  CHECK(t.at(4, 1) == 2.0);
  CHECK(t.at(5, 2) == 0.25);
  // BOU and EOU rows are random but seeded.
  CHECK(t.row(Vocab::kBou)[0] != t.row(Vocab::kEou)[0]);
  CHECK(LoadString(kToyVectors, 4).embeddings.table.value == t);
  CHECK(!(LoadString(kToyVectors, 4, 2).embeddings.table.value == t));
}

TEST_CASE("load vectors: errors") {
  try {
    LoadString("stop 1 2 3 4\ncar 1 2 3\n", 4);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(LoadString("", 4), FormatError);
  CHECK_THROWS_AS(LoadString("\n\n", 4), FormatError);
  CHECK_THROWS_AS(LoadString("stop 1 x 3 4\n", 4), FormatError);
}

TEST_CASE("load vectors: duplicates keep the first occurrence") {
  LoadedVectors lv = LoadString("stop 1 1\nStop 2 2\ncar 3 3\n", 2);
  CHECK(lv.duplicates == 1);
  CHECK(lv.vocab.size() == 6);
  CHECK(lv.embeddings.table.value.at(4, 0) == 1.0);
}

TEST_CASE("load vectors: d=100 keeps its dimension") {
  std::ostringstream text;
  for (int w = 0; w < 5; ++w) {
    text << "w" << w;
    for (int j = 0; j < 100; ++j) text << " " << (w * 0.01 + j * 0.001);
    text << "\n";
  }
  LoadedVectors lv = LoadString(text.str(), 100);
  CHECK(lv.embeddings.dim == 100);
  CHECK(lv.embeddings.table.value.shape() == Shape{9, 100});
}

TEST_CASE("embed gathers rows") {
  LoadedVectors lv = LoadString(kToyVectors, 4);
  std::vector<size_t> pad = {0};
  Tensor p = Embed(lv.embeddings, pad);
  CHECK(p.shape() == Shape{1, 4});
  for (double x : p.data()) CHECK(x == 0.0);
  std::vector<size_t> twice = {5, 5};
  Tensor t = Embed(lv.embeddings, twice);
  CHECK(t.shape() == Shape{2, 4});
  for (size_t j = 0; j < 4; ++j) CHECK(t.at(0, j) == t.at(1, j));
  std::vector<size_t> bad = {7};
  CHECK_THROWS_AS(Embed(lv.embeddings, bad), IndexError);
}

TEST_CASE("embedding gradient touches only gathered rows") {
  LoadedVectors lv = LoadString(kToyVectors, 4);
  Rng rng(3);
  Tensor w({4});
  for (double& x : w.mutable_data()) x = rng.Uniform(-1, 1);
  std::vector<size_t> ids = {4, 6, 4};
  auto build = [&](Tape& tape) {
    std::vector<Var> rows = Embed(tape, lv.embeddings, ids);
    std::vector<Var> terms;
    for (Var r : rows)
      terms.push_back(tape.Dot(tape.Tanh(r), tape.Constant(w)));
    return tape.Sum(terms);
  };
  std::vector<Parameter*> params = {&lv.embeddings.table};
  testing::GradCheck g = testing::CheckGradients(build, params);
  CHECK(g.max_rel_error < 1e-6);

  Tape tape;
  tape.Backward(build(tape));
  const ParamGrad& pg = tape.param_grads().at(&lv.embeddings.table);
  CHECK(pg.sparse);
  CHECK(pg.rows.size() == 2);
  CHECK(pg.rows.count(4) == 1);
  CHECK(pg.rows.count(6) == 1);

  lv.embeddings.trainable = false;
  Tape frozen;
  frozen.Backward(build(frozen));
  CHECK(frozen.param_grads().count(&lv.embeddings.table) == 0);
}

TEST_CASE("clustered vectors load back") {
  std::vector<std::pair<std::string, std::string>> words = {
      {"stop", "a"}, {"halt", "a"}, {"door", "b"}};
  std::ostringstream out;
  WriteClusteredVectors(out, words, 8, 5);
  LoadedVectors lv = LoadString(out.str(), 8);
  CHECK(lv.vocab.size() == 7);
  std::ostringstream again;
  WriteClusteredVectors(again, words, 8, 5);
  CHECK(out.str() == again.str());
  auto dist = [&](size_t a, size_t b) {
    double s = 0.0;
    for (size_t j = 0; j < 8; ++j) {
      const double d = lv.embeddings.table.value.at(a, j) -
                       lv.embeddings.table.value.at(b, j);
      s += d * d;
    }
    return s;
  };
  CHECK(dist(4, 5) < dist(4, 6));
}

}  // namespace
}  // namespace nlu
