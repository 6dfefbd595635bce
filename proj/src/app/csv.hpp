// Copyright 2026 The hjlax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV dialect used by every exporter: comma separators, LF line endings,
// '#'-prefixed "key: value" metadata lines before a single header row, and
// numeric cells printed with 17 significant digits so parsing them back
// reproduces the in-memory doubles bit for bit.

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hjapp {

// %.17g rendering; round-trips through strtod to the identical double.
std::string format_g17(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<double>& vals);

 private:
  std::ostream& os_;
};

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // First comment value for `key`, or an empty string.
  std::string comment(const std::string& key) const;
};

// Parses the dialect above; throws std::runtime_error on malformed input
// (missing header, ragged rows, or non-numeric cells).
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

}  // namespace hjapp
