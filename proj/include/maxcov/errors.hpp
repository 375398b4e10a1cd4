// Copyright 2026 The Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxcov {

// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed text that violates a semantic rule of the format
// (duplicate IDs, costs outside [0, L], unknown groups, ...).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A graph stream deletes an edge that is not live.
class StreamConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive oracle would enumerate more candidates than its cap allows.
class OracleTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompatibleSketch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of an operation (element out of range, bad probability, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace maxcov
