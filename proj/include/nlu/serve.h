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

#ifndef NLU_SERVE_H_
#define NLU_SERVE_H_

#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"
#include "nlu/bundle.h"

namespace nlu {

// Response object:
//   {"id":..,"intent":L,"confidence":C,
//    "slots":[{"token":t,"label":l},...],"keywords":[t,...]}
// "slots" lists every token with its slot label; "keywords" lists the
// tokens tagged as intent keywords. Intent and confidence are null for the
// tagger specs; lists are empty for specs that do not produce them.
nlohmann::ordered_json PredictionJson(const nlohmann::json& id,
                                      std::span<const std::string> tokens,
                                      const Prediction& prediction);

// Answers one request line `{"id":N,"text":"..."}`. Malformed requests get
// {"id":null,"error":"..."}.
nlohmann::ordered_json HandleRequest(const Bundle& bundle,
                                     const std::string& line);

// Reads requests until EOF and writes one response line per non-blank
// request line, in order, flushing after each.
void Serve(const Bundle& bundle, std::istream& in, std::ostream& out);

}  // namespace nlu

#endif  // NLU_SERVE_H_
