// Copyright 2026 The percwalk Authors
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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace percwalk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base of all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input or configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical guard tripped: dimension caps, unitarity, degenerate input (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Convergence or horizon failure (exit code 4).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An angle stored exactly as (num/den)·π, always gcd-reduced with den ≥ 1.
///
/// Used wherever rationality must be decided exactly, e.g. the cycle case
/// dispatch on α or the period of an asymptotic limit cycle.
struct PiFraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static PiFraction make(std::int64_t num, std::int64_t den);
  /// Parses "l/m", "l" or "-l/m". Throws ConfigError on malformed input.
  static PiFraction parse(std::string_view text);

  double radians() const { return kPi * static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend bool operator==(const PiFraction&, const PiFraction&) = default;
};

/// α = lπ/m for the 1D coin family.
using AlphaRational = PiFraction;

}  // namespace percwalk
