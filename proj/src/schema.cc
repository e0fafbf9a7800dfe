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

#include "nlu/schema.h"

namespace nlu {
namespace {

template <typename E, size_t N>
std::optional<E> Lookup(const std::array<std::string_view, N>& names,
                        std::string_view name) {
  for (size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <size_t N>
std::vector<std::string> Owned(const std::array<std::string_view, N>& names) {
  return {names.begin(), names.end()};
}

}  // namespace

std::optional<Intent> ParseIntent(std::string_view name) {
  return Lookup<Intent>(kIntentNames, name);
}

std::optional<Slot> ParseSlot(std::string_view name) {
  return Lookup<Slot>(kSlotNames, name);
}

std::optional<Keyword> ParseKeyword(std::string_view name) {
  return Lookup<Keyword>(kKeywordNames, name);
}

std::vector<std::string> IntentLabels() { return Owned(kIntentNames); }
std::vector<std::string> SlotLabels() { return Owned(kSlotNames); }
std::vector<std::string> KeywordLabels() { return Owned(kKeywordNames); }

}  // namespace nlu
