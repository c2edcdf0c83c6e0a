// Copyright 2026 The Frugal UFL Authors
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

#ifndef FRUGAL_UFL_ERRORS_H_
#define FRUGAL_UFL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace frugal_ufl {

// Caller supplied an argument outside its legal range (CLI exit code 1).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed instance file (CLI exit code 1).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base for errors that stem from the instance itself rather than from how the
// engine was called (CLI exit code 2).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A winner has no feasible alternative excluding it, or L \ OPT is empty:
// threshold payments and the frugal benchmark are undefined.
class MonopolyError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Distances are not a metric.
class MetricError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsatisfiableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// More facilities than the exhaustive solver accepts.
class CapExceededError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The allocation rule is not monotone in a facility's bid.
class NonMonotoneError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_ERRORS_H_
