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

#include "catsim/diagnostics.hpp"
#include "catsim/error.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace catsim {

namespace {
std::mutex g_mutex;
std::vector<std::string> g_warnings;
std::atomic<bool> g_to_stderr{true};
}  // namespace

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_warnings.push_back(message);
  if (g_to_stderr.load()) std::cerr << "catsim: warning: " << message << '\n';
}

std::vector<std::string> take_warnings() {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::vector<std::string> out;
  out.swap(g_warnings);
  return out;
}

void set_warnings_to_stderr(bool enabled) { g_to_stderr.store(enabled); }

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidTruncation: return "invalid-truncation";
    case ErrorCode::InvalidCutoff: return "invalid-cutoff";
    case ErrorCode::MemoryGuard: return "memory-guard";
    case ErrorCode::Embedding: return "embedding";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::Division: return "division";
    case ErrorCode::Assembly: return "assembly";
    case ErrorCode::Representation: return "representation";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Stiffness: return "stiffness";
    case ErrorCode::NumericalDegeneracy: return "numerical-degeneracy";
    case ErrorCode::Timeout: return "timeout";
    case ErrorCode::Integration: return "integration";
    case ErrorCode::CoefficientConsistency: return "coefficient-consistency";
    case ErrorCode::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace catsim
