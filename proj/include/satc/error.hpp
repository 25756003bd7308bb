// Copyright 2026 The satc Authors
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
#pragma once

#include <stdexcept>
#include <string>

namespace satc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: empty grids, k < 1, xi out of range, bad flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Parse failure in one of the text formats; carries the 1-based line.
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Lookup of an identifier that is not part of the dataset.
class LookupError : public DataError {
 public:
  using DataError::DataError;
};

/// A call that violates the order of a validation session.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Input on which the requested measure is undefined (e.g. zero initial error).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A function precondition on numeric input does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace satc
