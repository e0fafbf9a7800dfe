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

#include "nlu/hybrid.h"

#include "nlu/embeddings.h"
#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {

FreqTable FreqTable::Build(std::span<const Utterance> corpus) {
  if (corpus.empty())
    throw DataError("cannot build a frequency table from an empty corpus");
  FreqTable table;
  for (const Utterance& u : corpus) {
    u.Validate();
    const size_t i = Index(u.intent);
    table.priors[i] += 1.0;
    for (size_t t = 0; t < u.tokens.size(); ++t) {
      if (u.keywords[t] == Keyword::kIntent) {
        table.keywords[i][CaseFold(u.tokens[t])] += 1.0;
      }
      if (u.slots[t] != Slot::kNone) table.slots[i][Index(u.slots[t])] += 1.0;
    }
  }
  return table;
}

nlohmann::json FreqTable::ToJson() const {
  nlohmann::json intents = nlohmann::json::array();
  for (size_t i = 0; i < kIntentCount; ++i) {
    nlohmann::json slot_counts = nlohmann::json::object();
    for (size_t s = 0; s < kSlotCount; ++s) {
      if (static_cast<Slot>(s) == Slot::kNone) continue;
      slot_counts[std::string(kSlotNames[s])] = slots[i][s];
    }
    intents.push_back({{"intent", kIntentNames[i]},
                       {"prior", priors[i]},
                       {"keywords", keywords[i]},
                       {"slots", slot_counts}});
  }
  return {{"format", 1}, {"intents", intents}};
}

FreqTable FreqTable::FromJson(const nlohmann::json& j) {
  FreqTable table;
  try {
    const auto& intents = j.at("intents");
    if (!intents.is_array() || intents.size() != kIntentCount) {
      throw FormatError("frequency table must list all ten intents");
    }
    for (const auto& entry : intents) {
      auto intent = ParseIntent(entry.at("intent").get<std::string>());
      if (!intent) throw FormatError("frequency table names an unknown intent");
      const size_t i = Index(*intent);
      table.priors[i] = entry.at("prior").get<double>();
      table.keywords[i] =
          entry.at("keywords").get<std::map<std::string, double>>();
      for (const auto& [name, count] : entry.at("slots").items()) {
        auto slot = ParseSlot(name);
        if (!slot || *slot == Slot::kNone) {
          throw FormatError("frequency table names an unknown slot '" + name +
                            "'");
        }
        table.slots[i][Index(*slot)] = count.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad frequency table: ") + e.what());
  }
  return table;
}

uint64_t FreqTable::Fingerprint() const { return Fnv1a(ToJson().dump()); }

HybridDecision HybridMap(const FreqTable& table,
                         std::span<const std::string> keywords,
                         std::span<const Slot> slots, HybridMode mode) {
  HybridDecision d;
  bool evidence = false;
  for (const std::string& raw : keywords) {
    const std::string k = CaseFold(raw);
    double total = 0.0;
    for (size_t i = 0; i < kIntentCount; ++i) {
      auto it = table.keywords[i].find(k);
      if (it != table.keywords[i].end()) total += it->second;
    }
    if (!(total > 0.0)) continue;
    evidence = true;
    for (size_t i = 0; i < kIntentCount; ++i) {
      auto it = table.keywords[i].find(k);
      if (it != table.keywords[i].end()) d.scores[i] += it->second / total;
    }
  }
  if (mode == HybridMode::kKeywordsAndSlots) {
    for (Slot s : slots) {
      if (s == Slot::kNone) continue;
      double total = 0.0;
      for (size_t i = 0; i < kIntentCount; ++i)
        total += table.slots[i][Index(s)];
      if (!(total > 0.0)) continue;
      evidence = true;
      for (size_t i = 0; i < kIntentCount; ++i) {
        d.scores[i] += table.slots[i][Index(s)] / total;
      }
    }
  }
  if (!evidence) {
    d.intent = Intent::kOther;
    d.fallback = true;
    return d;
  }
  size_t best = 0;
  for (size_t i = 1; i < kIntentCount; ++i) {
    const bool better = d.scores[i] > d.scores[best] ||
                        (d.scores[i] == d.scores[best] &&
                         (table.priors[i] > table.priors[best] ||
                          (table.priors[i] == table.priors[best] &&
                           kIntentNames[i] < kIntentNames[best])));
    if (better) best = i;
  }
  d.intent = static_cast<Intent>(best);
  return d;
}

}  // namespace nlu
