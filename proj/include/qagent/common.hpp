// Copyright 2026 The qagent Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Shared scalar types and the exception hierarchy used across qagent.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qagent {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Thrown when a caller-supplied index, size or angle list is invalid.
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A policy or environment operation violates the register layout.
class ConfigurationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The differentiation engine met an operation it cannot traverse.
class UnsupportedOperation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Malformed circuit dump, circuit file or config file.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Training produced a non-finite reward or gradient.
class TrainingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qagent
