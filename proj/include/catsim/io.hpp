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

#include <fstream>
#include <string>
#include <vector>

namespace catsim {

// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_double(double v);

class CsvWriter {
 public:
  // Lines in `comments` are written first, each prefixed with "# ".
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::vector<std::string>& comments = {});
  void row(const std::vector<double>& values);
  void row_text(const std::vector<std::string>& cells);
  void close();

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t ncols_;
};

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace catsim
