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

#include <string>
#include <vector>

namespace catsim {

// Process-wide warning sink. Warnings go to stderr immediately and are also
// collected so the CLI can copy them into the run manifest.
void warn(const std::string& message);
std::vector<std::string> take_warnings();
void set_warnings_to_stderr(bool enabled);

}  // namespace catsim
