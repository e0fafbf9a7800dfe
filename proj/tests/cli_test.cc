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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "nlu/corpus.h"
#include "test_util.h"

namespace nlu {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result Run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string(NLU_CLI) + " " + args + " 2>/dev/null";
  if (!stdin_text.empty()) {
    const fs::path in = fs::temp_directory_path() / "nlu_cli_stdin.txt";
    std::ofstream(in) << stdin_text;
    cmd += " < " + in.string();
  }
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) { return testing::ReadText(p.string()); }

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const {
    return (path / f).string();
  }
};

const std::string kSmall =
    " --hidden-dim 8 --attention-dim 4 --embedding-dim 8 --max-epochs 2";

TEST_CASE("generate") {
  TempDir dir("nlu_cli_generate");
  Result r = Run("generate --out " + dir / "a.tsv" + " --n 3347 --seed 7");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("3347 utterances", 0) == 0);
  CHECK(r.out.find("SetChangeDest") != std::string::npos);
  CHECK(ReadCorpusFile(dir / "a.tsv").size() == 3347);
  CHECK(Run("generate --out " + dir / "b.tsv" + " --n 3347 --seed 7").code ==
        0);
  CHECK(Slurp(dir / "a.tsv") == Slurp(dir / "b.tsv"));

  CHECK(Run("generate --out " + dir / "c.tsv" + " --n 5").code == 0);
  CHECK(ReadCorpusFile(dir / "c.tsv").size() == 5);

  CHECK(Run("generate --out " + dir / "no/such/dir.tsv").code == 2);
  CHECK(Run("generate").code == 64);
  CHECK(Run("frobnicate").code == 64);
}

TEST_CASE("train") {
  TempDir dir("nlu_cli_train");
  const std::string data = testing::DataPath("toy50.tsv");
  CHECK(Run("train --model hybrid3 --data " + data + " --out " + dir / "x")
            .code == 64);
  std::ofstream(dir / "bad.tsv") << "# id=1\tintent=Stop\nstop\tNone\n";
  CHECK(Run("train --model joint --data " + dir / "bad.tsv" + " --out " +
            dir / "x" + kSmall)
            .code == 65);
  CHECK(Run("train --model joint --data " + dir / "missing.tsv" + " --out " +
            dir / "x" + kSmall)
            .code == 2);
  CHECK(Run("train --model joint --data " + data + " --out " + dir / "x" +
            kSmall + " --dropout 1.5")
            .code == 64);

  CHECK(Run("train --model hier_joint --data " + data + " --out " + dir / "hj" +
            kSmall)
            .code == 0);
  nlohmann::json index =
      nlohmann::json::parse(Slurp(dir.path / "hj/bundle.json"));
  CHECK(index["spec"] == "hier_joint");
  CHECK(index["files"].size() == 3);
  CHECK(fs::exists(dir.path / "hj/slot_tagger.nlu"));
  CHECK(fs::exists(dir.path / "hj/keyword_tagger.nlu"));
  CHECK(fs::exists(dir.path / "hj/stage2.nlu"));

  CHECK(Run("train --model hybrid1 --data " + data + " --out " + dir / "h1" +
            kSmall)
            .code == 0);
  CHECK(fs::exists(dir.path / "h1/keyword_tagger.nlu"));
  CHECK(fs::exists(dir.path / "h1/freq_table.json"));
  CHECK(!fs::exists(dir.path / "h1/slot_tagger.nlu"));

  CHECK(Run("train --model separate2 --data " + data + " --out " +
            dir / "s2a.nlu" + kSmall)
            .code == 0);
  CHECK(Run("train --model separate2 --data " + data + " --out " +
            dir / "s2b.nlu" + kSmall)
            .code == 0);
  CHECK(Slurp(dir.path / "s2a.nlu") == Slurp(dir.path / "s2b.nlu"));
  CHECK(Slurp(dir.path / "s2a.nlu").rfind("NLU1", 0) == 0);
}

TEST_CASE("eval") {
  TempDir dir("nlu_cli_eval");
  const std::string data = testing::DataPath("toy50.tsv");
  const std::string base =
      "eval --model slot_tagger --data " + data + " --k 10 --seed 3" + kSmall;
  Result a = Run(base + " --report " + dir / "a.json");
  CHECK(a.code == 0);
  std::vector<std::string> lines = Lines(a.out);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0].rfind("Slot Type", 0) == 0);
  CHECK(lines[2].rfind("Location", 0) == 0);
  CHECK(lines[8].rfind("None", 0) == 0);
  CHECK(lines[10].rfind("AVERAGE", 0) == 0);
  Result b = Run(base + " --report " + dir / "b.json");
  CHECK(Slurp(dir.path / "a.json") == Slurp(dir.path / "b.json"));
  nlohmann::json report = nlohmann::json::parse(Slurp(dir.path / "a.json"));
  CHECK(report["task"] == "slot_tagger");
  CHECK(report["classes"].size() == 7);
  CHECK(report["folds"].size() == 10);

  CHECK(Run("eval --model slot_tagger --data " + data + " --k 1").code == 64);
  CHECK(Run("eval --model joint --data " + data + " --k 2 --style slot_table" +
            kSmall)
            .code == 64);
}

TEST_CASE("predict and serve") {
  TempDir dir("nlu_cli_serve");
  const std::string data = testing::DataPath("toy50.tsv");
  // Overfit the toy corpus: monitor the training set itself.
  REQUIRE(Run("train --model separate1 --data " + data + " --out " +
              dir / "toy.nlu" +
              " --hidden-dim 16 --embedding-dim 16 --holdout 0"
              " --max-epochs 300 --patience 300 --dropout 0")
              .code == 0);
  Result p =
      Run("predict --bundle " + dir / "toy.nlu" + " --text 'stop the car'");
  CHECK(p.code == 0);
  nlohmann::json j = nlohmann::json::parse(p.out);
  CHECK(j["intent"] == "Stop");
  CHECK(j["confidence"].get<double>() > 0.0);

  REQUIRE(Run("train --model joint --data " + data + " --out " +
              dir / "joint.nlu" + kSmall)
              .code == 0);
  Result s = Run("serve --bundle " + dir / "joint.nlu",
                 "{\"id\":42,\"text\":\"Stop the car.\"}\n"
                 "this is not json\n"
                 "{\"text\":\"no id\"}\n"
                 "\n"
                 "{\"id\":7,\"text\":\"open the door\"}\n");
  CHECK(s.code == 0);
  std::vector<std::string> lines = Lines(s.out);
  REQUIRE(lines.size() == 4);
  nlohmann::json first = nlohmann::json::parse(lines[0]);
  CHECK(first["id"] == 42);
  CHECK(first["slots"].size() == 4);
  CHECK(first["slots"][3]["token"] == ".");
  CHECK(first["keywords"].is_array());
  CHECK(lines[0].rfind("{\"id\":42,\"intent\":", 0) == 0);
  for (size_t i : {1, 2}) {
    nlohmann::json e = nlohmann::json::parse(lines[i]);
    CHECK(e["id"].is_null());
    CHECK(e.contains("error"));
  }
  CHECK(nlohmann::json::parse(lines[3])["id"] == 7);

  // Corrupted magic bytes.
  std::string bytes = Slurp(dir.path / "joint.nlu");
  bytes[0] = 'X';
  std::ofstream(dir / "broken.nlu", std::ios::binary) << bytes;
  CHECK(Run("predict --bundle " + dir / "broken.nlu" + " --text stop").code ==
        66);
  CHECK(Run("serve --bundle " + dir / "broken.nlu", "{}\n").code == 66);
  CHECK(Run("predict --bundle " + dir / "nothing.nlu" + " --text stop").code ==
        2);
}

}  // namespace
}  // namespace nlu
