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

#ifndef NLU_SCHEMA_H_
#define NLU_SCHEMA_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlu {

// Utterance-level command classes, in declaration order.
enum class Intent : uint8_t {
  kSetChangeDest,
  kSetChangeRoute,
  kGoFaster,
  kGoSlower,
  kStop,
  kPark,
  kPullOver,
  kDropOff,
  kOpenDoor,
  kOther,
};

// Per-token slot types; kNone marks tokens outside any slot.
enum class Slot : uint8_t {
  kLocation,
  kPosition,
  kPerson,
  kObject,
  kTimeGuidance,
  kGesture,
  kNone,
};

// Per-token intent keyword marks.
enum class Keyword : uint8_t { kIntent, kNonIntent };

inline constexpr size_t kIntentCount = 10;
inline constexpr size_t kSlotCount = 7;
inline constexpr size_t kKeywordCount = 2;

inline constexpr std::array<std::string_view, kIntentCount> kIntentNames = {
    "SetChangeDest", "SetChangeRoute", "GoFaster", "GoSlower", "Stop",
    "Park",          "PullOver",       "DropOff",  "OpenDoor", "Other"};
inline constexpr std::array<std::string_view, kSlotCount> kSlotNames = {
    "Location",     "Position", "Person", "Object",
    "TimeGuidance", "Gesture",  "None"};
inline constexpr std::array<std::string_view, kKeywordCount> kKeywordNames = {
    "Intent", "NonIntent"};

constexpr size_t Index(Intent v) { return static_cast<size_t>(v); }
constexpr size_t Index(Slot v) { return static_cast<size_t>(v); }
constexpr size_t Index(Keyword v) { return static_cast<size_t>(v); }

constexpr std::string_view Name(Intent v) { return kIntentNames[Index(v)]; }
constexpr std::string_view Name(Slot v) { return kSlotNames[Index(v)]; }
constexpr std::string_view Name(Keyword v) { return kKeywordNames[Index(v)]; }

std::optional<Intent> ParseIntent(std::string_view name);
std::optional<Slot> ParseSlot(std::string_view name);
std::optional<Keyword> ParseKeyword(std::string_view name);

// Label name lists as owned strings, for metric and report code.
std::vector<std::string> IntentLabels();
std::vector<std::string> SlotLabels();
std::vector<std::string> KeywordLabels();

}  // namespace nlu

#endif  // NLU_SCHEMA_H_
