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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {

std::string CaseFold(std::string_view token) {
  std::string out(token);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Vocab::Vocab() {
  for (const char* t : {"<pad>", "<unk>", "<bou>", "<eou>"}) {
    index_.emplace(t, tokens_.size());
    tokens_.emplace_back(t);
  }
}

std::pair<size_t, bool> Vocab::Add(std::string_view token) {
  std::string folded = CaseFold(token);
  auto [it, inserted] = index_.emplace(folded, tokens_.size());
  if (inserted) tokens_.push_back(std::move(folded));
  return {it->second, inserted};
}

size_t Vocab::Index(std::string_view token) const {
  auto it = index_.find(CaseFold(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocab::Contains(std::string_view token) const {
  return index_.count(CaseFold(token)) > 0;
}

Vocab Vocab::FromTokens(std::span<const std::string> tokens) {
  Vocab v;
  if (tokens.size() < kReserved) {
    throw FormatError("vocabulary lacks the reserved entries");
  }
  for (size_t i = 0; i < kReserved; ++i) {
    if (tokens[i] != v.tokens_[i]) {
      throw FormatError("vocabulary entry " + std::to_string(i) +
                        " is not the reserved token " + v.tokens_[i]);
    }
  }
  for (size_t i = kReserved; i < tokens.size(); ++i) {
    if (!v.Add(tokens[i]).second) {
      throw FormatError("duplicate vocabulary entry '" + tokens[i] + "'");
    }
  }
  return v;
}

namespace {

void FillReservedRows(Tensor& table, size_t dim, double scale, Rng& rng) {
  const size_t words = table.rows() - Vocab::kReserved;
  for (size_t j = 0; j < dim; ++j) {
    table.at(Vocab::kPad, j) = 0.0;
    double sum = 0.0;
    for (size_t r = Vocab::kReserved; r < table.rows(); ++r) {
      sum += table.at(r, j);
    }
    table.at(Vocab::kUnk, j) = words > 0 ? sum / words : 0.0;
  }
  for (size_t r : {Vocab::kBou, Vocab::kEou}) {
    for (size_t j = 0; j < dim; ++j)
      table.at(r, j) = rng.Uniform(-scale, scale);
  }
}

}  // namespace

LoadedVectors LoadVectors(std::istream& in, size_t expected_dim, Rng& rng) {
  if (expected_dim == 0) throw ConfigError("embedding dimension must be > 0");
  LoadedVectors out;
  std::vector<double> values;
  std::string line;
  size_t line_no = 0;
  double square_sum = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::vector<double> vec;
    vec.reserve(expected_dim);
    std::string field;
    while (fields >> field) {
      char* end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw FormatError("line " + std::to_string(line_no) + ": bad number '" +
                          field + "'");
      }
      vec.push_back(v);
    }
    if (vec.size() != expected_dim) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(expected_dim) + " values, got " +
                        std::to_string(vec.size()));
    }
    if (!out.vocab.Add(token).second) {
      ++out.duplicates;
      continue;
    }
    for (double v : vec) square_sum += v * v;
    values.insert(values.end(), vec.begin(), vec.end());
  }
  if (values.empty()) throw FormatError("embedding file has no vectors");

  const size_t words = values.size() / expected_dim;
  std::vector<double> data(Vocab::kReserved * expected_dim, 0.0);
  data.insert(data.end(), values.begin(), values.end());
  Tensor table =
      Tensor::Matrix(out.vocab.size(), expected_dim, std::move(data));
  const double rms = std::sqrt(square_sum / (words * expected_dim));
  FillReservedRows(table, expected_dim, std::sqrt(3.0) * rms, rng);
  out.embeddings.table = {"embedding", std::move(table)};
  out.embeddings.dim = expected_dim;
  return out;
}

LoadedVectors LoadVectorsFile(const std::string& path, size_t expected_dim,
                              Rng& rng) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file " + path);
  return LoadVectors(in, expected_dim, rng);
}

EmbeddingMatrix RandomEmbeddings(const Vocab& vocab, size_t dim, Rng& rng) {
  if (dim == 0) throw ConfigError("embedding dimension must be > 0");
  const double scale = std::sqrt(3.0 / static_cast<double>(dim));
  Tensor table({vocab.size(), dim});
  for (size_t r = Vocab::kReserved; r < vocab.size(); ++r) {
    for (size_t j = 0; j < dim; ++j)
      table.at(r, j) = rng.Uniform(-scale, scale);
  }
  FillReservedRows(table, dim, scale, rng);
  EmbeddingMatrix m;
  m.table = {"embedding", std::move(table)};
  m.dim = dim;
  return m;
}

Tensor Embed(const EmbeddingMatrix& matrix, std::span<const size_t> indices) {
  if (indices.empty()) throw ContractError("cannot embed an empty sequence");
  std::vector<double> out;
  out.reserve(indices.size() * matrix.dim);
  for (size_t idx : indices) {
    if (idx >= matrix.rows()) {
      throw IndexError("embedding index " + std::to_string(idx) +
                       " out of range for " + std::to_string(matrix.rows()) +
                       " rows");
    }
    auto r = matrix.table.value.row(idx);
    out.insert(out.end(), r.begin(), r.end());
  }
  return Tensor::Matrix(indices.size(), matrix.dim, std::move(out));
}

std::vector<Var> Embed(Tape& tape, const EmbeddingMatrix& matrix,
                       std::span<const size_t> indices) {
  if (indices.empty()) throw ContractError("cannot embed an empty sequence");
  std::vector<Var> rows;
  rows.reserve(indices.size());
  for (size_t idx : indices) {
    rows.push_back(tape.Lookup(matrix.table, idx, matrix.trainable));
  }
  return rows;
}

void WriteClusteredVectors(
    std::ostream& out,
    std::span<const std::pair<std::string, std::string>> word_clusters,
    size_t dim, uint64_t seed) {
  Rng root(seed);
  std::map<std::string, std::vector<double>> centroids;
  char buf[32];
  for (const auto& [word, cluster] : word_clusters) {
    auto it = centroids.find(cluster);
    if (it == centroids.end()) {
      Rng crng = root.Split("centroid:" + cluster);
      std::vector<double> c(dim);
      for (double& v : c) v = crng.Uniform(-0.5, 0.5);
      it = centroids.emplace(cluster, std::move(c)).first;
    }
    Rng wrng = root.Split("word:" + word);
    out << word;
    for (size_t j = 0; j < dim; ++j) {
      const double v = 0.6 * it->second[j] + 0.4 * wrng.Uniform(-0.5, 0.5);
      std::snprintf(buf, sizeof(buf), " %.6f", v);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace nlu
