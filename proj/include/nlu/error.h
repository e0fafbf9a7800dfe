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

#ifndef NLU_ERROR_H_
#define NLU_ERROR_H_

#include <stdexcept>
#include <string>

namespace nlu {

// Base of every error raised by the library. Each subclass names the
// category a caller is expected to react to (the CLI maps them to exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or parameter dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN or infinite values where finite input is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Index outside the valid range (class index, vocabulary row, ...).
class IndexError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or hyperparameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent corpus data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed text resource such as an embedding file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Unreadable or corrupt model file (bad magic, version, bounds).
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

// File system failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlu

#endif  // NLU_ERROR_H_
