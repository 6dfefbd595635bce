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

#include "csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hjapp {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
  os_ << "# " << key << ": " << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os_ << ',';
    os_ << cols[i];
  }
  os_ << "\n";
}

void CsvWriter::row(const std::vector<double>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) os_ << ',';
    os_ << format_g17(vals[i]);
  }
  os_ << "\n";
}

std::string CsvTable::comment(const std::string& key) const {
  for (const auto& kv : comments) {
    if (kv.first == key) return kv.second;
  }
  return {};
}

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || (end && *end != '\0')) {
    throw std::runtime_error("read_csv: non-numeric cell '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto sep = body.find(": ");
      if (sep == std::string::npos) {
        table.comments.emplace_back(body, "");
      } else {
        table.comments.emplace_back(body.substr(0, sep), body.substr(sep + 2));
      }
      continue;
    }
    if (!have_header) {
      table.header = split_cells(line);
      have_header = true;
      continue;
    }
    const auto cells = split_cells(line);
    if (cells.size() != table.header.size()) {
      throw std::runtime_error("read_csv: row width does not match the header");
    }
    std::vector<double> vals;
    vals.reserve(cells.size());
    for (const auto& c : cells) vals.push_back(parse_cell(c));
    table.rows.push_back(std::move(vals));
  }
  if (!have_header) throw std::runtime_error("read_csv: missing header row");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
  return read_csv(in);
}

}  // namespace hjapp
