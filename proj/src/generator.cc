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

#include "nlu/generator.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {
namespace {

std::vector<std::string> Words(const std::string& phrase) {
  std::vector<std::string> out;
  std::istringstream in(phrase);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool IsPlaceholder(const std::string& part) {
  return part.size() > 2 && part.front() == '{' && part.back() == '}';
}

std::string LexiconKey(const std::string& part) {
  return part.substr(1, part.size() - 2);
}

Slot SlotOfKey(const std::string& key) {
  auto slot = ParseSlot(key.substr(0, key.find('.')));
  if (!slot || *slot == Slot::kNone) {
    throw ConfigError("placeholder {" + key + "} does not name a slot type");
  }
  return *slot;
}

const std::string& Pick(const std::vector<std::string>& items, Rng& rng) {
  return items[rng.Below(items.size())];
}

void Append(Utterance& u, const std::string& phrase, Slot slot,
            Keyword keyword) {
  for (std::string& w : Words(phrase)) {
    u.tokens.push_back(std::move(w));
    u.slots.push_back(slot);
    u.keywords.push_back(keyword);
  }
}

Intent SampleIntent(const std::array<double, kIntentCount>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double x = rng.Uniform() * total;
  for (size_t i = 0; i < kIntentCount; ++i) {
    if (x < weights[i]) return static_cast<Intent>(i);
    x -= weights[i];
  }
  return Intent::kOther;
}

void ApplyNoise(const GeneratorConfig& config, Utterance& u, Rng& rng) {
  std::vector<size_t> swappable;
  for (size_t t = 0; t < u.tokens.size(); ++t) {
    auto it = config.synonyms.find(u.tokens[t]);
    if (it != config.synonyms.end() && !it->second.empty()) {
      swappable.push_back(t);
    }
  }
  const bool swap = !swappable.empty();
  if (swap) {
    const size_t t = swappable[rng.Below(swappable.size())];
    u.tokens[t] = Pick(config.synonyms.at(u.tokens[t]), rng);
  }
  if ((!swap || rng.Bernoulli(0.5)) && !config.fillers.empty()) {
    const size_t at = rng.Below(u.tokens.size() + 1);
    u.tokens.insert(u.tokens.begin() + static_cast<ptrdiff_t>(at),
                    Pick(config.fillers, rng));
    u.slots.insert(u.slots.begin() + static_cast<ptrdiff_t>(at), Slot::kNone);
    u.keywords.insert(u.keywords.begin() + static_cast<ptrdiff_t>(at),
                      Keyword::kNonIntent);
  }
}

}  // namespace

void GeneratorConfig::Validate() const {
  if (count == 0) throw ConfigError("generator count must be positive");
  double total = 0.0;
  for (double w : intent_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("intent weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("intent weights sum to zero");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0) ||
      !(prefix_rate >= 0.0 && prefix_rate <= 1.0) ||
      !(suffix_rate >= 0.0 && suffix_rate <= 1.0)) {
    throw ConfigError("generator rates must lie in [0, 1]");
  }
  if (prefix_rate > 0.0 && prefixes.empty()) {
    throw ConfigError("prefix rate set but no prefixes given");
  }
  if (suffix_rate > 0.0 && suffixes.empty()) {
    throw ConfigError("suffix rate set but no suffixes given");
  }
  for (size_t i = 0; i < kIntentCount; ++i) {
    const std::string intent(kIntentNames[i]);
    if (templates[i].empty()) {
      throw ConfigError("intent " + intent + " has no templates");
    }
    for (const std::string& tmpl : templates[i]) {
      auto parts = Words(tmpl);
      if (parts.empty()) throw ConfigError("empty template for " + intent);
      for (const std::string& part : parts) {
        if (part == "*") throw ConfigError("bare '*' in template: " + tmpl);
        if (!IsPlaceholder(part)) continue;
        const std::string key = LexiconKey(part);
        SlotOfKey(key);
        auto it = lexicons.find(key);
        if (it == lexicons.end() || it->second.empty()) {
          throw ConfigError("no lexicon entries for {" + key + "}");
        }
        for (const std::string& entry : it->second) {
          if (Words(entry).empty()) {
            throw ConfigError("empty lexicon entry in {" + key + "}");
          }
        }
      }
    }
  }
}

Corpus GenerateCorpus(const GeneratorConfig& config) {
  config.Validate();
  const Rng root(config.seed);

  std::vector<Intent> intents;
  intents.reserve(config.count);
  Rng intent_rng = root.Split("intents");
  if (config.count >= kIntentCount) {
    for (size_t i = 0; i < kIntentCount; ++i) {
      intents.push_back(static_cast<Intent>(i));
    }
  }
  while (intents.size() < config.count) {
    intents.push_back(SampleIntent(config.intent_weights, intent_rng));
  }
  intent_rng.Shuffle(intents);

  std::vector<size_t> order(config.count);
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng noise_pick = root.Split("noise-pick");
  noise_pick.Shuffle(order);
  const auto noisy_count = static_cast<size_t>(
      std::ceil(config.noise_rate * static_cast<double>(config.count)));
  std::vector<bool> noisy(config.count, false);
  for (size_t i = 0; i < noisy_count && i < order.size(); ++i) {
    noisy[order[i]] = true;
  }

  Corpus corpus;
  corpus.reserve(config.count);
  for (size_t i = 0; i < config.count; ++i) {
    Rng rng = root.Split("utterance").Split(i);
    Utterance u;
    u.id = i + 1;
    u.intent = intents[i];
    const auto& pool = config.templates[Index(u.intent)];
    const std::string& tmpl = Pick(pool, rng);
    if (rng.Bernoulli(config.prefix_rate)) {
      Append(u, Pick(config.prefixes, rng), Slot::kNone, Keyword::kNonIntent);
    }
    for (const std::string& part : Words(tmpl)) {
      if (IsPlaceholder(part)) {
        const std::string key = LexiconKey(part);
        Append(u, Pick(config.lexicons.at(key), rng), SlotOfKey(key),
               Keyword::kNonIntent);
      } else if (part.front() == '*') {
        Append(u, part.substr(1), Slot::kNone, Keyword::kIntent);
      } else {
        Append(u, part, Slot::kNone, Keyword::kNonIntent);
      }
    }
    if (rng.Bernoulli(config.suffix_rate)) {
      Append(u, Pick(config.suffixes, rng), Slot::kNone, Keyword::kNonIntent);
    }
    if (noisy[i]) ApplyNoise(config, u, rng);
    u.Validate();
    corpus.push_back(std::move(u));
  }
  return corpus;
}

std::vector<std::pair<std::string, std::string>> GrammarWords(
    const GeneratorConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  std::map<std::string, std::string> cluster_of;
  auto add = [&](const std::string& word, const std::string& cluster) {
    if (cluster_of.emplace(word, cluster).second)
      out.emplace_back(word, cluster);
  };
  for (size_t i = 0; i < kIntentCount; ++i) {
    for (const std::string& tmpl : config.templates[i]) {
      for (const std::string& part : Words(tmpl)) {
        if (IsPlaceholder(part)) continue;
        if (part.front() == '*') {
          add(part.substr(1), "keyword:" + std::string(kIntentNames[i]));
        } else {
          add(part, "function");
        }
      }
    }
  }
  for (const auto& [key, entries] : config.lexicons) {
    const std::string cluster = "slot:" + key;
    for (const std::string& e : entries) {
      for (const std::string& w : Words(e)) add(w, cluster);
    }
  }
  for (const auto* list :
       {&config.prefixes, &config.suffixes, &config.fillers}) {
    for (const std::string& phrase : *list) {
      for (const std::string& w : Words(phrase)) add(w, "function");
    }
  }
  for (const auto& [word, alternatives] : config.synonyms) {
    auto it = cluster_of.find(word);
    const std::string cluster =
        it == cluster_of.end() ? "function" : it->second;
    for (const std::string& alt : alternatives) add(alt, cluster);
  }
  return out;
}

GeneratorConfig GeneratorConfig::Default() {
  GeneratorConfig c;
  c.intent_weights.fill(1.0);
  auto set = [&c](Intent intent, std::vector<std::string> templates) {
    c.templates[Index(intent)] = std::move(templates);
  };
  set(Intent::kSetChangeDest,
      {"*take {Person} to {Location}", "*go to {Location}",
       "*drive to {Location}", "i *want to *go to {Location}",
       "*change the *destination to {Location}",
       "*set the *destination to {Location}",
       "*head to {Location} {TimeGuidance}", "*bring {Person} to {Location}",
       "let us *go to {Location} instead", "*navigate to {Location}"});
  set(Intent::kSetChangeRoute,
      {"*turn {Position}", "*turn {Position} at {Location}",
       "*take a *different *route", "*change the *route", "*avoid {Location}",
       "*go *through {Location}", "*take the *highway",
       "*make a *u-turn {Gesture}", "*go *straight {TimeGuidance}",
       "*use the *side *streets", "*turn {Position} {Gesture}"});
  set(Intent::kGoFaster,
      {"*speed *up", "*go *faster", "*drive *faster {TimeGuidance}",
       "*hurry *up", "*accelerate a bit", "we are late , *go *faster",
       "can we *go *quicker", "*step on it"});
  set(Intent::kGoSlower,
      {"*slow *down", "*go *slower", "*drive *slower {TimeGuidance}",
       "*reduce the *speed", "*ease *up a bit", "you are *driving too *fast",
       "*take it *easy", "not so *fast"});
  set(Intent::kStop,
      {"*stop the car", "*stop {TimeGuidance}", "*stop {Position}",
       "*stop {Gesture}", "*halt {TimeGuidance}", "*brake {TimeGuidance}",
       "*stop the vehicle {Position}", "*wait {Gesture}"});
  set(Intent::kPark,
      {"*park {Position}", "*park {Gesture}", "*park the car at {Location}",
       "*find a *parking *spot", "*park {Position} of {Location}",
       "*look for *parking near {Location}", "*park the car {TimeGuidance}"});
  set(Intent::kPullOver,
      {"*pull *over", "*pull *over {TimeGuidance}", "*pull *over {Position}",
       "*pull *over {Gesture}", "*pull *up {Position}",
       "*pull to the *side {TimeGuidance}", "*pull *over to the *curb"});
  set(Intent::kDropOff,
      {"*drop {Person} *off {Position}", "*drop {Person} *off at {Location}",
       "*let {Person} *out {Gesture}", "*drop {Person} {Gesture}",
       "*let {Person} *out at {Location}", "i *get *out {Gesture}",
       "*drop {Person} *off {TimeGuidance}"});
  set(Intent::kOpenDoor,
      {"*open {Object.door}", "*unlock {Object.door}",
       "*open {Object.door} {TimeGuidance}", "can you *open {Object.door}",
       "*unlock {Object.door} for {Person}", "*open {Object.door} {Gesture}"});
  set(Intent::kOther,
      {"*turn *on {Object.other}", "*turn *off {Object.other}",
       "*open {Object.other}", "*close {Object.other}", "*play some *music",
       "*show the *map", "*change the *temperature", "*make it *warmer",
       "*roll *down {Object.other}", "*turn *up {Object.other}",
       "*lower {Object.other}"});

  c.lexicons = {
      {"Location",
       {"downtown",    "the airport",  "the mall",          "central park",
        "main street", "the hotel",    "the train station", "my office",
        "home",        "the hospital", "fifth avenue",      "the stadium",
        "starbucks",   "the library",  "union square",      "the museum",
        "city hall",   "the gym",      "the beach",         "my house",
        "the bank",    "walmart",      "the school",        "the university",
        "broadway",    "the harbor",   "the bus stop",      "the gas station"}},
      {"Position",
       {"left", "right", "on the left", "on the right", "at the corner",
        "next to the curb", "behind that car", "in front", "up ahead",
        "near the entrance", "at the next intersection", "across the street",
        "by the sidewalk", "on the side"}},
      {"Person",
       {"me", "us", "my friend", "my wife", "my husband", "john", "the kids",
        "him", "her", "everyone", "my son", "my daughter", "sarah",
        "my colleague"}},
      {"Object.door",
       {"the door", "my door", "the left door", "the right door",
        "the back door", "the side door", "the doors", "the rear door"}},
      {"Object.other",
       {"the window", "the windows", "the trunk", "the radio", "the music",
        "the ac", "the heater", "the sunroof", "the lights", "the fan",
        "the volume"}},
      {"TimeGuidance",
       {"now", "right now", "immediately", "in five minutes", "asap", "soon",
        "after the light", "when possible", "in a minute", "quickly",
        "at the next light", "right away"}},
      {"Gesture",
       {"here", "there", "over there", "this", "that", "this one", "that spot",
        "right here", "over here", "that one"}},
  };
  c.prefixes = {"please",
                "hey",
                "ok",
                "can you",
                "could you",
                "would you",
                "i need you to",
                "i would like you to",
                "just",
                "okay please",
                "would you please"};
  c.suffixes = {"please", ".", "!", "?", "thanks", "thank you", "please ."};
  c.fillers = {"uh", "um", "like", "actually", "well", "so"};
  c.synonyms = {
      {"stop", {"halt"}},          {"go", {"move"}},
      {"faster", {"quicker"}},     {"slower", {"slowly"}},
      {"drive", {"ride"}},         {"take", {"bring"}},
      {"close", {"shut"}},         {"drop", {"leave"}},
      {"hurry", {"rush"}},         {"route", {"path"}},
      {"destination", {"target"}}, {"car", {"vehicle"}},
      {"park", {"stop"}},          {"open", {"unlock"}},
  };
  return c;
}

}  // namespace nlu
