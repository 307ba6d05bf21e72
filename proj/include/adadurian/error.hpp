// Copyright (c) 2026 The adadurian Authors
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

#ifndef ADADURIAN_ERROR_HPP_
#define ADADURIAN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace adadurian {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (manifest, vocab, mel, wav, checkpoint).
class ParseError : public Error {
 public:
  using Error::Error;
};

// An id that does not resolve in its vocabulary.
class VocabError : public Error {
 public:
  using Error::Error;
};

// sum(durations) disagrees with the referenced mel.
class DurationMismatchError : public Error {
 public:
  using Error::Error;
};

// Tensor/sequence dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Bad or inconsistent configuration (flags, config file, preconditions).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A frozen parameter group changed during adaptation.
class FreezeViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace adadurian

#endif  // ADADURIAN_ERROR_HPP_
