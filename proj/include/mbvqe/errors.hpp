// Copyright 2026 The mbvqe Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mbvqe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown or duplicate qubit label.
class RegisterError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument (bad sizes, degenerate operators, out-of-range values).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Forced measurement outcome with (numerically) zero probability.
class MeasurementError : public Error {
 public:
  MeasurementError(const std::string& what, double p0, double p1)
      : Error(what), p0_(p0), p1_(p1) {}
  double p0() const noexcept { return p0_; }
  double p1() const noexcept { return p1_; }

 private:
  double p0_;
  double p1_;
};

/// Iterative solver failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Problem exceeds a configured size limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed pattern or circuit detected at execution time.
class ExecutionError : public Error {
 public:
  using Error::Error;
};

/// Unknown node template or unsupported lowering.
class CompilationError : public Error {
 public:
  using Error::Error;
};

/// Gradient rule does not apply to the parameterization.
class UnsupportedParameterization : public Error {
 public:
  using Error::Error;
};

/// V-score with E == E_inf.
class UndefinedVScore : public Error {
 public:
  using Error::Error;
};

/// Non-finite energy or similar numerical breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

struct ConfigIssue {
  std::string path;  // e.g. "ansatz.depth"
  std::string message;
};

/// Invalid run configuration; carries every problem found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : Error(render(issues)), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string render(const std::vector<ConfigIssue>& issues) {
    std::string s = "invalid configuration:";
    for (const auto& i : issues) s += "\n  " + (i.path.empty() ? std::string("<root>") : i.path) + ": " + i.message;
    return s;
  }
  std::vector<ConfigIssue> issues_;
};

}  // namespace mbvqe
