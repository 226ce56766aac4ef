// Copyright 2026 The cohkit Authors
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

#ifndef COHKIT_ERRORS_HPP_
#define COHKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace cohkit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value failed one of its type invariants (Hermiticity, unit trace, ...).
/// `invariant()` names the violated invariant for diagnostics.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Requested object would exceed the configured dimension cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Simulation would exceed its compute budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Conversion rate is undefined (target state carries no coherence).
class UndefinedRate : public Error {
 public:
  using Error::Error;
};

/// Iterative optimizer stopped without meeting its stopping rule.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

}  // namespace cohkit

#endif  // COHKIT_ERRORS_HPP_
