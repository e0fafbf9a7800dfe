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

#include "nlu/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "nlu/embeddings.h"
#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {

void Utterance::Validate() const {
  const std::string where = "utterance " + std::to_string(id);
  if (tokens.empty()) throw DataError(where + " has no tokens");
  if (slots.size() != tokens.size() || keywords.size() != tokens.size()) {
    throw DataError(where + ": " + std::to_string(tokens.size()) +
                    " tokens but " + std::to_string(slots.size()) +
                    " slot tags and " + std::to_string(keywords.size()) +
                    " keyword tags");
  }
  for (const std::string& t : tokens) {
    if (t.empty() || t.find_first_of("\t\n\r ") != std::string::npos) {
      throw DataError(where + " has an empty or whitespace-bearing token");
    }
  }
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  auto is_punct = [](char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
  };
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j == i) break;
    std::string_view word = text.substr(i, j - i);
    size_t lead = 0;
    while (lead < word.size() && is_punct(word[lead])) ++lead;
    size_t trail = word.size();
    while (trail > lead && is_punct(word[trail - 1])) --trail;
    for (size_t p = 0; p < lead; ++p) out.emplace_back(1, word[p]);
    if (trail > lead) out.push_back(CaseFold(word.substr(lead, trail - lead)));
    for (size_t p = trail; p < word.size(); ++p) out.emplace_back(1, word[p]);
    i = j;
  }
  return out;
}

namespace {

[[noreturn]] void Fail(size_t line_no, const std::string& message) {
  throw DataError("line " + std::to_string(line_no) + ": " + message);
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

Corpus ParseCorpus(std::istream& in) {
  Corpus corpus;
  std::set<uint64_t> ids;
  bool open = false;
  size_t header_line = 0;
  std::string line;
  size_t line_no = 0;

  auto close = [&]() {
    if (!open) return;
    if (corpus.back().tokens.empty()) {
      Fail(header_line,
           "utterance " + std::to_string(corpus.back().id) + " has no tokens");
    }
    open = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      close();
      continue;
    }
    if (line.starts_with("# ")) {
      close();
      constexpr std::string_view kIdPrefix = "# id=";
      constexpr std::string_view kIntentPrefix = "intent=";
      auto cols = SplitTabs(line);
      if (cols.size() != 2 || !cols[0].starts_with(kIdPrefix) ||
          !cols[1].starts_with(kIntentPrefix)) {
        Fail(line_no,
             "malformed header, expected '# id=<uint>\\tintent=<label>'");
      }
      std::string_view id_text = cols[0].substr(kIdPrefix.size());
      uint64_t id = 0;
      auto [ptr, ec] =
          std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
      if (ec != std::errc() || ptr != id_text.data() + id_text.size() ||
          id_text.empty()) {
        Fail(line_no, "bad utterance id '" + std::string(id_text) + "'");
      }
      auto intent = ParseIntent(cols[1].substr(kIntentPrefix.size()));
      if (!intent) {
        Fail(line_no, "unknown intent label '" +
                          std::string(cols[1].substr(kIntentPrefix.size())) +
                          "'");
      }
      if (!ids.insert(id).second) {
        Fail(line_no, "duplicate utterance id " + std::to_string(id));
      }
      Utterance u;
      u.id = id;
      u.intent = *intent;
      corpus.push_back(std::move(u));
      open = true;
      header_line = line_no;
      continue;
    }
    if (!open) Fail(line_no, "token line without a preceding intent header");
    auto cols = SplitTabs(line);
    if (cols.size() != 3) {
      Fail(line_no, "expected 3 tab-separated columns, got " +
                        std::to_string(cols.size()));
    }
    if (cols[0].empty() || cols[0].find(' ') != std::string_view::npos) {
      Fail(line_no, "empty or space-bearing token");
    }
    auto slot = ParseSlot(cols[1]);
    if (!slot)
      Fail(line_no, "unknown slot label '" + std::string(cols[1]) + "'");
    auto keyword = ParseKeyword(cols[2]);
    if (!keyword) {
      Fail(line_no, "unknown keyword label '" + std::string(cols[2]) + "'");
    }
    Utterance& u = corpus.back();
    u.tokens.emplace_back(cols[0]);
    u.slots.push_back(*slot);
    u.keywords.push_back(*keyword);
  }
  close();
  return corpus;
}

Corpus ParseCorpus(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseCorpus(in);
}

Corpus ReadCorpusFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path);
  return ParseCorpus(in);
}

std::string WriteCorpus(std::span<const Utterance> corpus) {
  std::string out;
  for (const Utterance& u : corpus) {
    u.Validate();
    out += "# id=";
    out += std::to_string(u.id);
    out += "\tintent=";
    out += Name(u.intent);
    out += '\n';
    for (size_t t = 0; t < u.tokens.size(); ++t) {
      out += u.tokens[t];
      out += '\t';
      out += Name(u.slots[t]);
      out += '\t';
      out += Name(u.keywords[t]);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void WriteCorpusFile(const std::string& path,
                     std::span<const Utterance> corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus file " + path);
  const std::string text = WriteCorpus(corpus);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing corpus file " + path);
}

uint64_t Fingerprint(std::span<const Utterance> corpus) {
  return Fnv1a(WriteCorpus(corpus));
}

std::vector<Fold> KFoldSplit(std::span<const Utterance> corpus, size_t k,
                             uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold split needs k >= 2");
  if (corpus.size() < k) {
    throw ConfigError("cannot split " + std::to_string(corpus.size()) +
                      " utterances into " + std::to_string(k) + " folds");
  }
  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng(seed).Split("kfold");
  rng.Shuffle(order);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return Index(corpus[a].intent) < Index(corpus[b].intent);
  });
  std::vector<Fold> folds(k);
  std::vector<size_t> fold_of(corpus.size());
  for (size_t pos = 0; pos < order.size(); ++pos) fold_of[order[pos]] = pos % k;
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (size_t f = 0; f < k; ++f) {
      (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
    }
  }
  return folds;
}

Corpus Select(std::span<const Utterance> corpus,
              std::span<const size_t> indices) {
  Corpus out;
  out.reserve(indices.size());
  for (size_t i : indices) out.push_back(corpus[i]);
  return out;
}

}  // namespace nlu
