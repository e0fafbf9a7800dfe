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

#include "nlu/rng.h"

namespace nlu {

uint64_t Rng::Mix(uint64_t x) {
  // splitmix64 finalizer.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::Split(uint64_t stream) const {
  return Rng(Mix(key_ ^ Mix(stream + 0x3c6ef372fe94f82bULL)), 0);
}

Rng Rng::Split(std::string_view name) const { return Split(Fnv1a(name)); }

uint64_t Rng::NextU64() {
  uint64_t n = counter_++;
  return Mix(key_ + Mix(n));
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

size_t Rng::Below(size_t n) {
  // Lemire's multiply-shift with rejection; unbiased.
  uint64_t bound = static_cast<uint64_t>(n);
  uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    unsigned __int128 m = static_cast<unsigned __int128>(NextU64()) * bound;
    if (static_cast<uint64_t>(m) >= threshold) {
      return static_cast<size_t>(m >> 64);
    }
  }
}

uint64_t Fnv1a(std::string_view bytes, uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace nlu
