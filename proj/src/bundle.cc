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

#include "nlu/bundle.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nlu/error.h"
#include "nlu/model_file.h"

namespace nlu {
namespace {

namespace fs = std::filesystem;

constexpr int kBundleFormat = 1;

struct SpecInfo {
  ModelSpec spec;
  const char* name;
};

constexpr SpecInfo kSpecInfo[] = {
    {ModelSpec::kHybrid1, "hybrid1"},
    {ModelSpec::kHybrid2, "hybrid2"},
    {ModelSpec::kSeparate1, "separate1"},
    {ModelSpec::kSeparate2, "separate2"},
    {ModelSpec::kJoint, "joint"},
    {ModelSpec::kHierSeparate1, "hier_separate1"},
    {ModelSpec::kHierSeparate2, "hier_separate2"},
    {ModelSpec::kHierJoint, "hier_joint"},
    {ModelSpec::kSlotTagger, "slot_tagger"},
    {ModelSpec::kKeywordTagger, "keyword_tagger"},
};

std::string ToBytes(const ModelFile& file) {
  std::ostringstream out;
  file.Save(out);
  return out.str();
}

ModelFile FromBytes(const std::string& bytes) {
  std::istringstream in(bytes);
  return ModelFile::Load(in);
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteAll(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << bytes;
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

std::string FileName(const std::string& component) {
  return component == "freq_table" ? "freq_table.json" : component + ".nlu";
}

Stage2Kind Stage2For(ModelSpec spec) {
  switch (spec) {
    case ModelSpec::kHierSeparate1:
      return Stage2Kind::kSeparate;
    case ModelSpec::kHierSeparate2:
      return Stage2Kind::kSeparateAttention;
    default:
      return Stage2Kind::kJoint;
  }
}

bool IsHierarchical(ModelSpec spec) {
  return spec == ModelSpec::kHierSeparate1 ||
         spec == ModelSpec::kHierSeparate2 || spec == ModelSpec::kHierJoint;
}

}  // namespace

const char* SpecName(ModelSpec spec) {
  for (const SpecInfo& info : kSpecInfo) {
    if (info.spec == spec) return info.name;
  }
  throw ContractError("unknown model spec");
}

ModelSpec ParseSpec(const std::string& name) {
  for (const SpecInfo& info : kSpecInfo) {
    if (name == info.name) return info.spec;
  }
  throw ConfigError("unknown model spec: " + name);
}

bool IsTaggerSpec(ModelSpec spec) {
  return spec == ModelSpec::kSlotTagger || spec == ModelSpec::kKeywordTagger;
}

bool IsSingleFileSpec(ModelSpec spec) {
  return IsTaggerSpec(spec) || spec == ModelSpec::kSeparate1 ||
         spec == ModelSpec::kSeparate2 || spec == ModelSpec::kJoint;
}

Bundle Bundle::Train(ModelSpec spec, std::span<const Utterance> corpus,
                     const Hyper& hyper, const LoadedVectors* pretrained) {
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");
  TrainInputs inputs;
  inputs.pretrained = pretrained;
  Bundle b(spec);
  switch (spec) {
    case ModelSpec::kSlotTagger:
      b.slot_ = TaggerModel::Train(corpus, TaggerTask::kSlot, hyper, inputs);
      break;
    case ModelSpec::kKeywordTagger:
      b.keyword_ =
          TaggerModel::Train(corpus, TaggerTask::kKeyword, hyper, inputs);
      break;
    case ModelSpec::kSeparate1:
    case ModelSpec::kSeparate2:
      b.intent_ = IntentModel::Train(corpus, spec == ModelSpec::kSeparate2,
                                     hyper, inputs);
      break;
    case ModelSpec::kJoint:
      b.joint_ = JointModel::Train(corpus, hyper, inputs);
      break;
    case ModelSpec::kHybrid1:
    case ModelSpec::kHybrid2:
      b.keyword_ =
          TaggerModel::Train(corpus, TaggerTask::kKeyword,
                             ComponentHyper(hyper, "keyword_tagger"), inputs);
      if (spec == ModelSpec::kHybrid2) {
        b.slot_ =
            TaggerModel::Train(corpus, TaggerTask::kSlot,
                               ComponentHyper(hyper, "slot_tagger"), inputs);
      }
      b.table_ = FreqTable::Build(corpus);
      break;
    case ModelSpec::kHierSeparate1:
    case ModelSpec::kHierSeparate2:
    case ModelSpec::kHierJoint:
      b.pipeline_ = HierarchicalPipeline::Train(corpus, Stage2For(spec), hyper,
                                                pretrained);
      break;
  }
  return b;
}

Prediction Bundle::Predict(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ContractError("cannot predict an empty utterance");
  Prediction p;
  switch (spec_) {
    case ModelSpec::kSlotTagger:
      p.slots = slot_->TagSlots(tokens);
      break;
    case ModelSpec::kKeywordTagger:
      p.keywords = keyword_->TagKeywords(tokens);
      break;
    case ModelSpec::kSeparate1:
    case ModelSpec::kSeparate2: {
      Classification c = intent_->Classify(tokens);
      p.intent = c.intent;
      p.confidence = c.confidence;
      break;
    }
    case ModelSpec::kJoint: {
      JointPrediction j = joint_->Predict(tokens);
      p.intent = j.intent;
      p.confidence = j.confidence;
      for (size_t label : j.token_labels) {
        p.slots.push_back(FusedSlot(label));
        p.keywords.push_back(FusedKeyword(label));
      }
      break;
    }
    case ModelSpec::kHybrid1:
    case ModelSpec::kHybrid2: {
      p.keywords = keyword_->TagKeywords(tokens);
      std::vector<std::string> terms;
      for (size_t t = 0; t < tokens.size(); ++t) {
        if (p.keywords[t] == Keyword::kIntent) terms.push_back(tokens[t]);
      }
      std::vector<Slot> types;
      HybridMode mode = HybridMode::kKeywordsOnly;
      if (slot_) {
        mode = HybridMode::kKeywordsAndSlots;
        p.slots = slot_->TagSlots(tokens);
        for (Slot s : p.slots) {
          if (s != Slot::kNone) types.push_back(s);
        }
      }
      HybridDecision d = HybridMap(*table_, terms, types, mode);
      p.intent = d.intent;
      double total = 0.0;
      for (double s : d.scores) total += s;
      p.confidence = (d.fallback || total <= 0.0)
                         ? 0.0
                         : d.scores[Index(d.intent)] / total;
      break;
    }
    case ModelSpec::kHierSeparate1:
    case ModelSpec::kHierSeparate2:
    case ModelSpec::kHierJoint: {
      HierarchicalResult r = pipeline_->Predict(tokens);
      p.intent = r.intent;
      p.confidence = r.confidence;
      p.slots = std::move(r.slots);
      p.keywords = std::move(r.keywords);
      break;
    }
  }
  return p;
}

std::vector<std::pair<std::string, std::string>> Bundle::Serialize() const {
  std::vector<std::pair<std::string, std::string>> out;
  if (pipeline_) {
    out.emplace_back("slot_tagger", ToBytes(pipeline_->slot_tagger().ToFile()));
    out.emplace_back("keyword_tagger",
                     ToBytes(pipeline_->keyword_tagger().ToFile()));
    if (const IntentModel* m = pipeline_->intent_model()) {
      out.emplace_back("stage2", ToBytes(m->ToFile()));
    } else {
      out.emplace_back("stage2", ToBytes(pipeline_->joint_model()->ToFile()));
    }
    return out;
  }
  if (slot_) out.emplace_back("slot_tagger", ToBytes(slot_->ToFile()));
  if (keyword_) out.emplace_back("keyword_tagger", ToBytes(keyword_->ToFile()));
  if (intent_) out.emplace_back("intent", ToBytes(intent_->ToFile()));
  if (joint_) out.emplace_back("joint", ToBytes(joint_->ToFile()));
  if (table_) out.emplace_back("freq_table", table_->ToJson().dump(2) + "\n");
  return out;
}

void Bundle::Save(const std::string& path) const {
  auto parts = Serialize();
  if (IsSingleFileSpec(spec_)) {
    WriteAll(path, parts.front().second);
    return;
  }
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw IoError("cannot create " + path + ": " + ec.message());
  nlohmann::json index;
  index["format"] = kBundleFormat;
  index["spec"] = SpecName(spec_);
  index["files"] = nlohmann::json::object();
  for (const auto& [component, bytes] : parts) {
    const std::string name = FileName(component);
    index["files"][component] = name;
    WriteAll(fs::path(path) / name, bytes);
  }
  WriteAll(fs::path(path) / "bundle.json", index.dump(2) + "\n");
}

Bundle Bundle::Load(const std::string& path) {
  if (!fs::exists(path)) throw IoError("no such bundle: " + path);
  if (!fs::is_directory(path)) {
    ModelFile file = ModelFile::LoadFile(path);
    const std::string kind = file.manifest.value("kind", "");
    if (kind == "tagger") {
      TaggerModel m = TaggerModel::FromFile(file);
      Bundle b(m.task() == TaggerTask::kSlot ? ModelSpec::kSlotTagger
                                             : ModelSpec::kKeywordTagger);
      (m.task() == TaggerTask::kSlot ? b.slot_ : b.keyword_) = std::move(m);
      return b;
    }
    if (kind == "intent") {
      IntentModel m = IntentModel::FromFile(file);
      Bundle b(m.use_attention() ? ModelSpec::kSeparate2
                                 : ModelSpec::kSeparate1);
      b.intent_ = std::move(m);
      return b;
    }
    if (kind == "joint") {
      Bundle b(ModelSpec::kJoint);
      b.joint_ = JointModel::FromFile(file);
      return b;
    }
    throw ModelFormatError("unknown model kind '" + kind + "' in " + path);
  }

  nlohmann::json index;
  try {
    index = nlohmann::json::parse(ReadAll(fs::path(path) / "bundle.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad bundle.json: ") + e.what());
  }
  ModelSpec spec;
  try {
    if (index.at("format").get<int>() != kBundleFormat) {
      throw ModelFormatError("unsupported bundle format in " + path);
    }
    spec = ParseSpec(index.at("spec").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad bundle.json: ") + e.what());
  } catch (const ConfigError& e) {
    throw ModelFormatError(e.what());
  }
  if (IsSingleFileSpec(spec)) {
    throw ModelFormatError("spec " + std::string(SpecName(spec)) +
                           " is not a bundle directory");
  }
  auto component = [&](const std::string& name) -> std::string {
    const auto files = index.value("files", nlohmann::json::object());
    if (!files.is_object() || !files.contains(name) ||
        !files.at(name).is_string()) {
      throw ModelFormatError("bundle.json lists no " + name);
    }
    return ReadAll(fs::path(path) / files.at(name).get<std::string>());
  };
  auto tagger = [&](const std::string& name, TaggerTask task) {
    TaggerModel m = TaggerModel::FromFile(FromBytes(component(name)));
    if (m.task() != task) {
      throw ModelFormatError(name + " holds a " + TaskName(m.task()) +
                             " tagger");
    }
    return m;
  };

  Bundle b(spec);
  if (IsHierarchical(spec)) {
    TaggerModel slot = tagger("slot_tagger", TaggerTask::kSlot);
    TaggerModel keyword = tagger("keyword_tagger", TaggerTask::kKeyword);
    ModelFile stage2 = FromBytes(component("stage2"));
    if (spec == ModelSpec::kHierJoint) {
      b.pipeline_.emplace(std::move(slot), std::move(keyword),
                          JointModel::FromFile(stage2));
    } else {
      IntentModel m = IntentModel::FromFile(stage2);
      if (m.use_attention() != (spec == ModelSpec::kHierSeparate2)) {
        throw ModelFormatError("stage-2 attention does not match the spec");
      }
      b.pipeline_.emplace(std::move(slot), std::move(keyword), std::move(m));
    }
    return b;
  }
  b.keyword_ = tagger("keyword_tagger", TaggerTask::kKeyword);
  if (spec == ModelSpec::kHybrid2) {
    b.slot_ = tagger("slot_tagger", TaggerTask::kSlot);
  }
  try {
    b.table_ =
        FreqTable::FromJson(nlohmann::json::parse(component("freq_table")));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad freq_table.json: ") + e.what());
  } catch (const FormatError& e) {
    throw ModelFormatError(std::string("bad freq_table.json: ") + e.what());
  }
  return b;
}

}  // namespace nlu
