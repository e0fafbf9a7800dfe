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

#ifndef NLU_MODEL_FILE_H_
#define NLU_MODEL_FILE_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nlu/tensor.h"

namespace nlu {

// Binary model container:
//
//   bytes 0-3   magic "NLU1"
//   bytes 4-5   format version, u16 little-endian (currently 1)
//   bytes 6-9   manifest length N, u32 little-endian
//   next N      JSON manifest, space padded so the payload is 4-byte aligned
//   rest        payload: little-endian f32 tensor data
//
// The manifest carries model metadata plus a "tensors" directory of
// {name, offset, shape} entries; offsets are payload-relative bytes.
struct ModelFile {
  static constexpr uint16_t kVersion = 1;

  nlohmann::json manifest = nlohmann::json::object();
  std::vector<std::pair<std::string, Tensor>> tensors;

  void Add(std::string name, const Tensor& t) {
    tensors.emplace_back(std::move(name), t);
  }
  // Throws ModelFormatError when absent.
  const Tensor& Get(const std::string& name) const;

  void Save(std::ostream& out) const;
  void SaveFile(const std::string& path) const;
  // Values are widened from f32; throws ModelFormatError on a bad magic,
  // unsupported version, or out-of-bounds tensor entry.
  static ModelFile Load(std::istream& in);
  static ModelFile LoadFile(const std::string& path);
};

// Rounds every value to the nearest f32 (the precision models are stored in).
void RoundToFloat(Tensor& t);

}  // namespace nlu

#endif  // NLU_MODEL_FILE_H_
