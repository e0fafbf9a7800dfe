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

#ifndef NLU_RNG_H_
#define NLU_RNG_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace nlu {

// Counter-based random stream. The n-th draw of a stream is a pure function
// of (key, n), so streams can be split by name or index and replayed
// bit-identically on any platform. No standard-library distributions are
// used because their output is implementation defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(Mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  // Derives an independent child stream. The parent is not advanced.
  Rng Split(uint64_t stream) const;
  Rng Split(std::string_view name) const;

  uint64_t NextU64();

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be positive.
  size_t Below(size_t n);

  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = Below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

  static uint64_t Mix(uint64_t x);

 private:
  Rng(uint64_t key, int) : key_(key) {}

  uint64_t key_;
  uint64_t counter_ = 0;
};

// 64-bit FNV-1a, stable across platforms. Used for fingerprints.
uint64_t Fnv1a(std::string_view bytes, uint64_t hash = 0xcbf29ce484222325ULL);

}  // namespace nlu

#endif  // NLU_RNG_H_
