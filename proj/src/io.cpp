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

#include "catsim/io.hpp"

#include <charconv>
#include <cmath>

#include "catsim/error.hpp"

namespace catsim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::string>& comments)
    : path_(path), out_(path, std::ios::binary), ncols_(columns.size()) {
  if (!out_) fail(ErrorCode::Io, "cannot open " + path + " for writing");
  for (const auto& c : comments) out_ << "# " << c << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_) fail(ErrorCode::Io, "CSV row width mismatch in " + path_);
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_) fail(ErrorCode::Io, "CSV row width mismatch in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) fail(ErrorCode::Io, "failed writing " + path_);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  out.close();
  if (!out) fail(ErrorCode::Io, "failed writing " + path);
}

}  // namespace catsim
