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

#ifndef NLU_GENERATOR_H_
#define NLU_GENERATOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nlu/corpus.h"
#include "nlu/schema.h"

namespace nlu {

// Grammar for synthetic in-vehicle commands.
//
// A template is a space-separated sequence of parts:
//   word          plain token, tagged None / NonIntent
//   *word         intent keyword, tagged None / Intent
//   {Type}        filler drawn from lexicons["Type"], tagged with slot Type
//   {Type.name}   filler drawn from lexicons["Type.name"], tagged Type
// Lexicon entries, prefixes, suffixes and fillers are space-separated phrases.
struct GeneratorConfig {
  size_t count = 3347;
  uint64_t seed = 7;
  std::array<double, kIntentCount> intent_weights{};
  std::array<std::vector<std::string>, kIntentCount> templates;
  std::map<std::string, std::vector<std::string>> lexicons;
  std::vector<std::string> prefixes;
  std::vector<std::string> suffixes;
  // Inserted words used by the paraphrase noise.
  std::vector<std::string> fillers;
  // Replacement words for the synonym swaps of the paraphrase noise.
  std::map<std::string, std::vector<std::string>> synonyms;
  double prefix_rate = 0.35;
  double suffix_rate = 0.35;
  // Fraction of utterances (rounded up) that receive paraphrase noise.
  double noise_rate = 0.10;

  // Throws ConfigError when the grammar is unusable.
  void Validate() const;

  // The built-in grammar: ten intents, uniform weights.
  static GeneratorConfig Default();
};

// Samples config.count utterances with ids 1..count. With count >= 10 every
// intent appears at least once. Deterministic in the config.
Corpus GenerateCorpus(const GeneratorConfig& config);

// Every word the grammar can emit, paired with a coarse cluster name
// (keyword intent, slot type or function word), in first-seen order.
std::vector<std::pair<std::string, std::string>> GrammarWords(
    const GeneratorConfig& config);

}  // namespace nlu

#endif  // NLU_GENERATOR_H_
