// Copyright 2026 The sensched Authors
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

#ifndef SENSCHED_ERRORS_H_
#define SENSCHED_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sensched {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: wrong dimensions, out-of-range indices, bad configs.
class InputError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, indefinite matrices, ill-conditioned solves.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An enumeration or horizon exceeded its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A schedule failed the empirical boundedness check.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// Fixed-point or recurrence search did not converge. Carries the residual
// history so callers can tell slow convergence from divergence.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// The periodic approximation missed its target gap.
class ApproximationError : public Error {
 public:
  ApproximationError(const std::string& what, double best_gap)
      : Error(what), best_gap_(best_gap) {}

  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

}  // namespace sensched

#endif  // SENSCHED_ERRORS_H_
