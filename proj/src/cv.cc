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

#include "nlu/cv.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "nlu/error.h"
#include "nlu/rng.h"

namespace nlu {
namespace {

nlohmann::json ClassesJson(const Scores& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const ClassMetrics& c : s.classes) {
    out.push_back({{"label", c.label},
                   {"support", c.support},
                   {"precision", c.precision},
                   {"recall", c.recall},
                   {"f1", c.f1}});
  }
  return out;
}

Scores ScoresFromJson(const nlohmann::json& classes, double weighted_f1) {
  Scores s;
  for (const auto& c : classes) {
    ClassMetrics m;
    m.label = c.at("label").get<std::string>();
    m.support = c.at("support").get<size_t>();
    m.precision = c.at("precision").get<double>();
    m.recall = c.at("recall").get<double>();
    m.f1 = c.at("f1").get<double>();
    s.total += m.support;
    s.classes.push_back(std::move(m));
  }
  s.weighted_f1 = weighted_f1;
  return s;
}

}  // namespace

nlohmann::json CvReport::ToJson() const {
  nlohmann::json j;
  j["task"] = task;
  j["seed"] = seed;
  j["k"] = k;
  j["hyper"] = hyper;
  j["classes"] = ClassesJson(scores);
  j["weighted_f1"] = scores.weighted_f1;
  j["folds"] = nlohmann::json::array();
  for (const FoldRecord& f : folds) {
    nlohmann::json fj;
    fj["index"] = f.index;
    fj["train_size"] = f.train_size;
    fj["train_fingerprint"] = f.train_fingerprint;
    if (f.table_fingerprint) fj["table_fingerprint"] = *f.table_fingerprint;
    fj["test_ids"] = f.test_ids;
    fj["classes"] = ClassesJson(f.scores);
    fj["weighted_f1"] = f.scores.weighted_f1;
    j["folds"].push_back(std::move(fj));
  }
  return j;
}

CvReport CvReport::FromJson(const nlohmann::json& j) {
  try {
    CvReport r;
    r.task = j.at("task").get<std::string>();
    r.seed = j.at("seed").get<uint64_t>();
    r.k = j.at("k").get<size_t>();
    r.hyper = j.at("hyper");
    r.scores =
        ScoresFromJson(j.at("classes"), j.at("weighted_f1").get<double>());
    for (const auto& fj : j.at("folds")) {
      FoldRecord f;
      f.index = fj.at("index").get<size_t>();
      f.train_size = fj.at("train_size").get<size_t>();
      f.train_fingerprint = fj.at("train_fingerprint").get<uint64_t>();
      if (fj.contains("table_fingerprint")) {
        f.table_fingerprint = fj.at("table_fingerprint").get<uint64_t>();
      }
      f.test_ids = fj.at("test_ids").get<std::vector<uint64_t>>();
      f.scores =
          ScoresFromJson(fj.at("classes"), fj.at("weighted_f1").get<double>());
      r.folds.push_back(std::move(f));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad report: ") + e.what());
  }
}

std::string CvReport::Serialize() const { return ToJson().dump(2) + "\n"; }

CvReport RunCvWith(const std::string& task, std::span<const std::string> labels,
                   std::span<const Utterance> corpus, size_t k, uint64_t seed,
                   const FoldEvaluator& evaluate, size_t threads) {
  const std::vector<Fold> folds = KFoldSplit(corpus, k, seed);
  std::vector<FoldOutput> outputs(folds.size());

  auto run = [&](size_t f) {
    Corpus train = Select(corpus, folds[f].train);
    Corpus test = Select(corpus, folds[f].test);
    outputs[f] = evaluate(train, test, f);
    if (outputs[f].gold.size() != outputs[f].pred.size()) {
      throw ContractError("fold evaluator returned mismatched lists");
    }
  };

  threads = std::max<size_t>(1, std::min(threads, folds.size()));
  if (threads == 1) {
    for (size_t f = 0; f < folds.size(); ++f) run(f);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (size_t f = next++; f < folds.size(); f = next++) {
          try {
            run(f);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  CvReport report;
  report.task = task;
  report.seed = seed;
  report.k = k;
  std::vector<size_t> gold, pred;
  for (size_t f = 0; f < folds.size(); ++f) {
    const FoldOutput& out = outputs[f];
    FoldRecord rec;
    rec.index = f;
    rec.train_size = folds[f].train.size();
    for (size_t i : folds[f].test) rec.test_ids.push_back(corpus[i].id);
    rec.train_fingerprint = out.train_fingerprint;
    rec.table_fingerprint = out.table_fingerprint;
    rec.scores = Score(out.gold, out.pred, labels);
    report.folds.push_back(std::move(rec));
    gold.insert(gold.end(), out.gold.begin(), out.gold.end());
    pred.insert(pred.end(), out.pred.begin(), out.pred.end());
  }
  report.scores = Score(gold, pred, labels);
  return report;
}

uint64_t FoldSeed(uint64_t seed, size_t fold) {
  return Rng(seed).Split("fold").Split(fold).NextU64();
}

std::vector<std::string> SpecLabels(ModelSpec spec) {
  switch (spec) {
    case ModelSpec::kSlotTagger:
      return SlotLabels();
    case ModelSpec::kKeywordTagger:
      return KeywordLabels();
    default:
      return IntentLabels();
  }
}

CvReport RunCv(ModelSpec spec, const Hyper& hyper,
               std::span<const Utterance> corpus, size_t k, uint64_t seed,
               const LoadedVectors* pretrained, size_t threads) {
  hyper.Validate();
  const std::vector<std::string> labels = SpecLabels(spec);
  FoldEvaluator evaluate = [&](std::span<const Utterance> train,
                               std::span<const Utterance> test, size_t fold) {
    Hyper h = hyper;
    h.seed = FoldSeed(hyper.seed, fold);
    Bundle model = Bundle::Train(spec, train, h, pretrained);
    FoldOutput out;
    out.train_fingerprint = Fingerprint(train);
    if (const FreqTable* table = model.freq_table()) {
      out.table_fingerprint = table->Fingerprint();
    }
    for (const Utterance& u : test) {
      Prediction p = model.Predict(u.tokens);
      if (spec == ModelSpec::kSlotTagger) {
        for (size_t t = 0; t < u.tokens.size(); ++t) {
          out.gold.push_back(Index(u.slots[t]));
          out.pred.push_back(Index(p.slots[t]));
        }
      } else if (spec == ModelSpec::kKeywordTagger) {
        for (size_t t = 0; t < u.tokens.size(); ++t) {
          out.gold.push_back(Index(u.keywords[t]));
          out.pred.push_back(Index(p.keywords[t]));
        }
      } else {
        out.gold.push_back(Index(u.intent));
        out.pred.push_back(Index(*p.intent));
      }
    }
    return out;
  };
  CvReport report =
      RunCvWith(SpecName(spec), labels, corpus, k, seed, evaluate, threads);
  report.hyper = hyper.ToJson();
  return report;
}

}  // namespace nlu
