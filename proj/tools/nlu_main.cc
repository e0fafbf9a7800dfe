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

// Command-line front end: corpus generation, training, cross-validation,
// prediction and NDJSON serving.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlu/bundle.h"
#include "nlu/corpus.h"
#include "nlu/cv.h"
#include "nlu/embeddings.h"
#include "nlu/error.h"
#include "nlu/generator.h"
#include "nlu/hyper.h"
#include "nlu/report.h"
#include "nlu/rng.h"
#include "nlu/serve.h"

namespace {

constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitModel = 66;

struct RunFlags {
  uint64_t seed = 1;
  std::string cell = "lstm";
  size_t hidden_dim = nlu::Hyper().hidden_dim;
  size_t attention_dim = nlu::Hyper().attention_dim;
  size_t embedding_dim = 0;  // 0: file dimension, or the default
  double dropout = nlu::Hyper().dropout;
  double learning_rate = nlu::Hyper().learning_rate;
  size_t max_epochs = nlu::Hyper().max_epochs;
  size_t patience = nlu::Hyper().patience;
  double holdout = nlu::Hyper().holdout_fraction;
  bool frozen_embeddings = false;
  std::string embeddings;
};

void AddRunFlags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--cell", f.cell, "recurrent cell: lstm or gru");
  cmd->add_option("--hidden-dim", f.hidden_dim, "hidden units per direction");
  cmd->add_option("--attention-dim", f.attention_dim, "attention width");
  cmd->add_option("--embedding-dim", f.embedding_dim,
                  "embedding dimension (defaults to the vector file's)");
  cmd->add_option("--dropout", f.dropout, "dropout rate in [0,1)");
  cmd->add_option("--learning-rate", f.learning_rate, "Adam step size");
  cmd->add_option("--max-epochs", f.max_epochs, "epoch limit");
  cmd->add_option("--patience", f.patience, "early stopping patience");
  cmd->add_option("--holdout", f.holdout, "early stopping holdout share");
  cmd->add_flag("--frozen-embeddings", f.frozen_embeddings,
                "keep embedding vectors fixed");
  cmd->add_option("--embeddings", f.embeddings, "text word vectors");
}

// Number of values on the first non-blank line of a vector file.
size_t VectorFileDim(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nlu::IoError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string field;
    size_t n = 0;
    while (fields >> field) ++n;
    if (n > 1) return n - 1;
  }
  throw nlu::FormatError(path + ": no vectors");
}

struct Run {
  nlu::Hyper hyper;
  std::optional<nlu::LoadedVectors> vectors;
  const nlu::LoadedVectors* pretrained() const {
    return vectors ? &*vectors : nullptr;
  }
};

Run MakeRun(const RunFlags& f) {
  Run run;
  nlu::Hyper& h = run.hyper;
  h.seed = f.seed;
  try {
    h.cell = nlu::ParseCellKind(f.cell);
  } catch (const nlu::Error& e) {
    throw nlu::ConfigError(e.what());
  }
  h.hidden_dim = f.hidden_dim;
  h.attention_dim = f.attention_dim;
  h.dropout = f.dropout;
  h.learning_rate = f.learning_rate;
  h.max_epochs = f.max_epochs;
  h.patience = f.patience;
  h.holdout_fraction = f.holdout;
  h.trainable_embeddings = !f.frozen_embeddings;
  if (!f.embeddings.empty()) {
    h.embedding_dim =
        f.embedding_dim ? f.embedding_dim : VectorFileDim(f.embeddings);
    nlu::Rng rng = nlu::Rng(f.seed).Split("vectors");
    run.vectors = nlu::LoadVectorsFile(f.embeddings, h.embedding_dim, rng);
  } else if (f.embedding_dim) {
    h.embedding_dim = f.embedding_dim;
  }
  h.Validate();
  return run;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw nlu::IoError("cannot write " + path);
  out << text;
  if (!out.flush()) throw nlu::IoError("write failed: " + path);
}

int Generate(const std::string& out, size_t n, uint64_t seed) {
  nlu::GeneratorConfig config = nlu::GeneratorConfig::Default();
  config.count = n;
  config.seed = seed;
  nlu::Corpus corpus = nlu::GenerateCorpus(config);
  nlu::WriteCorpusFile(out, corpus);
  std::array<size_t, nlu::kIntentCount> histogram{};
  for (const nlu::Utterance& u : corpus) ++histogram[nlu::Index(u.intent)];
  std::cout << corpus.size() << " utterances\n";
  for (size_t i = 0; i < nlu::kIntentCount; ++i) {
    std::cout << "  " << nlu::kIntentNames[i] << "\t" << histogram[i] << "\n";
  }
  return 0;
}

int ToyVectors(const std::string& out, size_t dim, uint64_t seed) {
  std::ostringstream text;
  auto words = nlu::GrammarWords(nlu::GeneratorConfig::Default());
  nlu::WriteClusteredVectors(text, words, dim, seed);
  WriteText(out, text.str());
  std::cout << words.size() << " vectors of dimension " << dim << "\n";
  return 0;
}

int Train(const std::string& model, const std::string& data,
          const std::string& out, const RunFlags& flags) {
  const nlu::ModelSpec spec = nlu::ParseSpec(model);
  Run run = MakeRun(flags);
  nlu::Corpus corpus = nlu::ReadCorpusFile(data);
  nlu::Bundle bundle =
      nlu::Bundle::Train(spec, corpus, run.hyper, run.pretrained());
  bundle.Save(out);
  std::cout << "trained " << nlu::SpecName(spec) << " on " << corpus.size()
            << " utterances -> " << out << "\n";
  return 0;
}

int Eval(const std::string& model, const std::string& data, size_t k,
         const std::string& report_path, const std::string& table_path,
         const std::string& style_name, size_t threads, const RunFlags& flags) {
  const nlu::ModelSpec spec = nlu::ParseSpec(model);
  if (k < 2) throw nlu::ConfigError("--k must be at least 2");
  const nlu::ReportStyle style = style_name.empty()
                                     ? nlu::DefaultStyle(spec)
                                     : nlu::ParseReportStyle(style_name);
  Run run = MakeRun(flags);
  nlu::Corpus corpus = nlu::ReadCorpusFile(data);
  nlu::CvReport report = nlu::RunCv(spec, run.hyper, corpus, k, flags.seed,
                                    run.pretrained(), threads);
  const std::string table = nlu::RenderReport(report, style);
  if (!report_path.empty()) WriteText(report_path, report.Serialize());
  if (!table_path.empty()) WriteText(table_path, table);
  std::cout << table;
  return 0;
}

int Predict(const std::string& bundle_path, const std::string& text) {
  nlu::Bundle bundle = nlu::Bundle::Load(bundle_path);
  nlohmann::json request = {{"id", 0}, {"text", text}};
  nlohmann::ordered_json response = nlu::HandleRequest(bundle, request.dump());
  std::cout << response.dump() << std::endl;
  return response.contains("error") ? kExitData : 0;
}

int Serve(const std::string& bundle_path) {
  nlu::Bundle bundle = nlu::Bundle::Load(bundle_path);
  nlu::Serve(bundle, std::cin, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"In-cabin command understanding: intents, slots, keywords"};
  app.require_subcommand(1);

  std::string out, data, model, bundle, text, report, table, style;
  size_t n = 3347, k = 10, dim = 50, threads = 1;
  uint64_t seed = 7;
  RunFlags run;
  std::function<int()> action;

  CLI::App* gen = app.add_subcommand("generate", "write a synthetic corpus");
  gen->add_option("--out", out, "corpus path")->required();
  gen->add_option("--n", n, "utterance count");
  gen->add_option("--seed", seed, "generator seed");
  gen->callback([&] { action = [&] { return Generate(out, n, seed); }; });

  CLI::App* toy = app.add_subcommand(
      "toy-vectors", "write clustered word vectors for the grammar words");
  toy->add_option("--out", out, "vector file path")->required();
  toy->add_option("--dim", dim, "vector dimension");
  toy->add_option("--seed", seed, "vector seed");
  toy->callback([&] { action = [&] { return ToyVectors(out, dim, seed); }; });

  CLI::App* train = app.add_subcommand("train", "train a model on a corpus");
  train->add_option("--model", model, "model spec")->required();
  train->add_option("--data", data, "corpus path")->required();
  train->add_option("--out", out, "model file or bundle directory")->required();
  AddRunFlags(train, run);
  train->callback(
      [&] { action = [&] { return Train(model, data, out, run); }; });

  CLI::App* eval = app.add_subcommand("eval", "k-fold cross-validation");
  eval->add_option("--model", model, "model spec")->required();
  eval->add_option("--data", data, "corpus path")->required();
  eval->add_option("--k", k, "fold count");
  eval->add_option("--report", report, "JSON report path");
  eval->add_option("--table", table, "text table path");
  eval->add_option("--style", style,
                   "slot_table, keyword_table, intent_model_table or "
                   "intent_wise_table");
  eval->add_option("--threads", threads, "folds trained in parallel");
  AddRunFlags(eval, run);
  eval->callback([&] {
    action = [&] {
      return Eval(model, data, k, report, table, style, threads, run);
    };
  });

  CLI::App* predict = app.add_subcommand("predict", "analyze one utterance");
  predict->add_option("--bundle", bundle, "model file or bundle")->required();
  predict->add_option("--text", text, "utterance")->required();
  predict->callback([&] { action = [&] { return Predict(bundle, text); }; });

  CLI::App* serve =
      app.add_subcommand("serve", "answer NDJSON requests on stdin");
  serve->add_option("--bundle", bundle, "model file or bundle")->required();
  serve->callback([&] { action = [&] { return Serve(bundle); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    return action();
  } catch (const nlu::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlu::ModelFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const nlu::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlu::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlu::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
