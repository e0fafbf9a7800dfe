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

#include "nlu/model_file.h"

#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "nlu/error.h"

namespace nlu {
namespace {

constexpr char kMagic[4] = {'N', 'L', 'U', '1'};

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t GetU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

}  // namespace

void RoundToFloat(Tensor& t) {
  for (double& v : t.mutable_data())
    v = static_cast<double>(static_cast<float>(v));
}

const Tensor& ModelFile::Get(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw ModelFormatError("model file has no tensor '" + name + "'");
}

void ModelFile::Save(std::ostream& out) const {
  nlohmann::json m = manifest;
  nlohmann::json dir = nlohmann::json::array();
  uint64_t offset = 0;
  for (const auto& [name, t] : tensors) {
    dir.push_back({{"name", name}, {"offset", offset}, {"shape", t.shape()}});
    offset += 4 * t.size();
  }
  m["tensors"] = std::move(dir);
  std::string text = m.dump();
  constexpr size_t kHeader = 10;
  while ((kHeader + text.size()) % 4 != 0) text.push_back(' ');

  std::string bytes(kMagic, 4);
  PutU16(bytes, kVersion);
  PutU32(bytes, static_cast<uint32_t>(text.size()));
  bytes += text;
  bytes.reserve(bytes.size() + offset);
  for (const auto& [name, t] : tensors) {
    for (double v : t.data()) {
      const float f = static_cast<float>(v);
      uint32_t u;
      std::memcpy(&u, &f, 4);
      PutU32(bytes, u);
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void ModelFile::SaveFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file " + path);
  Save(out);
  if (!out) throw IoError("failed writing model file " + path);
}

ModelFile ModelFile::Load(std::istream& in) {
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 10 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ModelFormatError("not a model file (bad magic bytes)");
  }
  const uint16_t version = static_cast<uint16_t>(p[4] | p[5] << 8);
  if (version != kVersion) {
    throw ModelFormatError("unsupported model format version " +
                           std::to_string(version));
  }
  const uint32_t manifest_len = GetU32(p + 6);
  if (10 + static_cast<uint64_t>(manifest_len) > bytes.size()) {
    throw ModelFormatError("manifest extends past end of file");
  }
  ModelFile file;
  try {
    file.manifest = nlohmann::json::parse(bytes.substr(10, manifest_len));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("unreadable manifest: ") + e.what());
  }
  const size_t payload_start = 10 + manifest_len;
  const uint64_t payload_size = bytes.size() - payload_start;
  if (!file.manifest.is_object() || !file.manifest.contains("tensors") ||
      !file.manifest["tensors"].is_array()) {
    throw ModelFormatError("manifest lacks a tensor directory");
  }
  try {
    for (const auto& entry : file.manifest["tensors"]) {
      const std::string name = entry.at("name").get<std::string>();
      const uint64_t offset = entry.at("offset").get<uint64_t>();
      const Shape shape = entry.at("shape").get<Shape>();
      uint64_t count = 1;
      for (size_t d : shape) count *= d;
      if (shape.empty() || count == 0 || offset % 4 != 0 ||
          offset + 4 * count > payload_size) {
        throw ModelFormatError("tensor '" + name +
                               "' lies outside the payload or is misaligned");
      }
      std::vector<double> data(count);
      const unsigned char* src = p + payload_start + offset;
      for (uint64_t i = 0; i < count; ++i) {
        const uint32_t u = GetU32(src + 4 * i);
        float f;
        std::memcpy(&f, &u, 4);
        data[i] = static_cast<double>(f);
      }
      file.tensors.emplace_back(name, Tensor(shape, std::move(data)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad tensor directory: ") + e.what());
  }
  file.manifest.erase("tensors");
  return file;
}

ModelFile ModelFile::LoadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path);
  return Load(in);
}

}  // namespace nlu
