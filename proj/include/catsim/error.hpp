// Copyright 2026 The catsim Authors
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
#include <string_view>

namespace catsim {

enum class ErrorCode {
  InvalidTruncation,
  InvalidCutoff,
  MemoryGuard,
  Embedding,
  DimensionMismatch,
  InvalidState,
  Division,
  Assembly,
  Representation,
  Domain,
  Stiffness,
  NumericalDegeneracy,
  Timeout,
  Integration,
  CoefficientConsistency,
  DegenerateSpectrum,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by steady_state; carries the residual reached before giving up.
class TimeoutError : public Error {
 public:
  TimeoutError(const std::string& what, double last_residual, double elapsed)
      : Error(ErrorCode::Timeout, what),
        last_residual_(last_residual),
        elapsed_(elapsed) {}

  double last_residual() const { return last_residual_; }
  double elapsed() const { return elapsed_; }

 private:
  double last_residual_;
  double elapsed_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace catsim
