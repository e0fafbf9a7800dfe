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

#ifndef NLU_HYBRID_H_
#define NLU_HYBRID_H_

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlu/corpus.h"
#include "nlu/schema.h"

namespace nlu {

// Per-intent term statistics for the rule-based intent mapper.
struct FreqTable {
  // keywords[i][token]: how often `token` is tagged Intent in intent i.
  std::array<std::map<std::string, double>, kIntentCount> keywords;
  // slots[i][s]: how many tokens carry slot type s in intent i (None is
  // never counted).
  std::array<std::array<double, kSlotCount>, kIntentCount> slots{};
  // priors[i]: number of utterances with intent i.
  std::array<double, kIntentCount> priors{};

  // Throws DataError on an empty corpus.
  static FreqTable Build(std::span<const Utterance> corpus);

  nlohmann::json ToJson() const;
  static FreqTable FromJson(const nlohmann::json& j);
  uint64_t Fingerprint() const;

  bool operator==(const FreqTable&) const = default;
};

enum class HybridMode { kKeywordsOnly, kKeywordsAndSlots };

struct HybridDecision {
  Intent intent = Intent::kOther;
  std::array<double, kIntentCount> scores{};
  bool fallback = false;  // no evidence matched the table
};

// score(i) = Σ_k tf(k,i) / Σ_j tf(k,j) over the extracted keywords, plus
// (mode kKeywordsAndSlots) the same normalized share for each extracted slot
// type. Highest score wins; ties go to the higher prior, then to the
// lexicographically smaller label name. No matching evidence -> Other.
HybridDecision HybridMap(const FreqTable& table,
                         std::span<const std::string> keywords,
                         std::span<const Slot> slots, HybridMode mode);

}  // namespace nlu

#endif  // NLU_HYBRID_H_
