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

#include <iosfwd>
#include <string>

namespace catsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct RunOptions {
  bool full = false;
};

// Errors are reported as one JSON object on `err`.
int run_command(const std::string& config_path, const RunOptions& opts, std::ostream& out,
                std::ostream& err);
int validate_command(const std::string& config_path, const RunOptions& opts, std::ostream& out,
                     std::ostream& err);
void list_command(std::ostream& out);

std::string sha256_hex(const std::string& bytes);

}  // namespace catsim::cli
