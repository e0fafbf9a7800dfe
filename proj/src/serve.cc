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

#include "nlu/serve.h"

#include <istream>
#include <ostream>

#include "nlu/corpus.h"
#include "nlu/error.h"

namespace nlu {
namespace {

nlohmann::ordered_json ErrorJson(const nlohmann::json& id,
                                 const std::string& message) {
  return {{"id", id}, {"error", message}};
}

}  // namespace

nlohmann::ordered_json PredictionJson(const nlohmann::json& id,
                                      std::span<const std::string> tokens,
                                      const Prediction& prediction) {
  nlohmann::ordered_json out;
  out["id"] = id;
  if (prediction.intent) {
    out["intent"] = std::string(Name(*prediction.intent));
    out["confidence"] = prediction.confidence;
  } else {
    out["intent"] = nullptr;
    out["confidence"] = nullptr;
  }
  out["slots"] = nlohmann::ordered_json::array();
  for (size_t t = 0; t < prediction.slots.size(); ++t) {
    out["slots"].push_back({{"token", tokens[t]},
                            {"label", std::string(Name(prediction.slots[t]))}});
  }
  out["keywords"] = nlohmann::ordered_json::array();
  for (size_t t = 0; t < prediction.keywords.size(); ++t) {
    if (prediction.keywords[t] == Keyword::kIntent) {
      out["keywords"].push_back(tokens[t]);
    }
  }
  return out;
}

nlohmann::ordered_json HandleRequest(const Bundle& bundle,
                                     const std::string& line) {
  nlohmann::json request;
  try {
    request = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    return ErrorJson(nullptr, "request is not valid JSON");
  }
  if (!request.is_object()) {
    return ErrorJson(nullptr, "request must be a JSON object");
  }
  if (!request.contains("id") || !request["id"].is_number_integer()) {
    return ErrorJson(nullptr, "request needs an integer \"id\"");
  }
  if (!request.contains("text") || !request["text"].is_string()) {
    return ErrorJson(nullptr, "request needs a string \"text\"");
  }
  const nlohmann::json& id = request["id"];
  std::vector<std::string> tokens =
      Tokenize(request["text"].get<std::string>());
  if (tokens.empty()) return ErrorJson(id, "text has no tokens");
  try {
    return PredictionJson(id, tokens, bundle.Predict(tokens));
  } catch (const Error& e) {
    return ErrorJson(id, e.what());
  }
}

void Serve(const Bundle& bundle, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << HandleRequest(bundle, line).dump() << '\n';
    out.flush();
  }
}

}  // namespace nlu
