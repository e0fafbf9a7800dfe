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

#ifndef NLU_BUNDLE_H_
#define NLU_BUNDLE_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlu/corpus.h"
#include "nlu/embeddings.h"
#include "nlu/hierarchical.h"
#include "nlu/hybrid.h"
#include "nlu/hyper.h"
#include "nlu/intent_model.h"
#include "nlu/joint_model.h"
#include "nlu/schema.h"
#include "nlu/tagger.h"

namespace nlu {

// The ten trainable configurations: eight utterance-level intent
// recognizers and the two token taggers.
enum class ModelSpec {
  kHybrid1,
  kHybrid2,
  kSeparate1,
  kSeparate2,
  kJoint,
  kHierSeparate1,
  kHierSeparate2,
  kHierJoint,
  kSlotTagger,
  kKeywordTagger,
};

inline constexpr std::array<ModelSpec, 10> kAllSpecs = {
    ModelSpec::kHybrid1,       ModelSpec::kHybrid2,   ModelSpec::kSeparate1,
    ModelSpec::kSeparate2,     ModelSpec::kJoint,     ModelSpec::kHierSeparate1,
    ModelSpec::kHierSeparate2, ModelSpec::kHierJoint, ModelSpec::kSlotTagger,
    ModelSpec::kKeywordTagger};

const char* SpecName(ModelSpec spec);
// Throws ConfigError for an unknown name.
ModelSpec ParseSpec(const std::string& name);
// True for slot_tagger and keyword_tagger, which predict no intent.
bool IsTaggerSpec(ModelSpec spec);
// Single-file specs persist as one model file, the others as a directory.
bool IsSingleFileSpec(ModelSpec spec);

struct Prediction {
  std::optional<Intent> intent;  // absent for tagger specs
  double confidence = 0.0;
  std::vector<Slot> slots;        // empty when the spec does not tag slots
  std::vector<Keyword> keywords;  // empty when the spec does not tag keywords
};

// A trained model of any spec, with uniform prediction and persistence.
class Bundle {
 public:
  static Bundle Train(ModelSpec spec, std::span<const Utterance> corpus,
                      const Hyper& hyper,
                      const LoadedVectors* pretrained = nullptr);

  ModelSpec spec() const { return spec_; }
  Prediction Predict(std::span<const std::string> tokens) const;

  // FreqTable of the hybrid specs, null otherwise.
  const FreqTable* freq_table() const { return table_ ? &*table_ : nullptr; }

  // Single-file specs write a model file at `path`; the others create the
  // directory `path` holding bundle.json and its component files.
  void Save(const std::string& path) const;
  // Throws ModelFormatError for bad contents and IoError for missing files.
  static Bundle Load(const std::string& path);

  // Name -> serialized bytes of every component, in a fixed order.
  std::vector<std::pair<std::string, std::string>> Serialize() const;

 private:
  explicit Bundle(ModelSpec spec) : spec_(spec) {}

  ModelSpec spec_;
  std::optional<TaggerModel> slot_;
  std::optional<TaggerModel> keyword_;
  std::optional<IntentModel> intent_;
  std::optional<JointModel> joint_;
  std::optional<FreqTable> table_;
  std::optional<HierarchicalPipeline> pipeline_;
};

}  // namespace nlu

#endif  // NLU_BUNDLE_H_
