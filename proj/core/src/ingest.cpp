//
// Copyright 2026 The Puffercal Authors
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
//

#include "puffercal/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "puffercal/errors.hpp"

namespace puffercal {

namespace {

// One RFC 4180 record: comma separated, optional double quotes, "" escapes,
// fields may contain commas and newlines when quoted. Blank lines are
// skipped. `line` advances past every newline consumed, so errors can name
// their source line.
bool read_record(std::istream& in, std::vector<std::string>& fields,
                 std::uint64_t& line, std::uint64_t& record_line) {
  while (in.peek() != EOF) {
    fields.clear();
    record_line = line;
    std::string field;
    bool quoted = false;
    bool any = false;
    while (true) {
      const int c = in.get();
      if (quoted) {
        if (c == EOF) {
          std::ostringstream msg;
          msg << "unterminated quoted field starting near line " << record_line;
          throw ValidationError(msg.str());
        }
        if (c == '"') {
          if (in.peek() == '"') {
            field.push_back('"');
            in.get();
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(static_cast<char>(c));
        }
        continue;
      }
      if (c == '"' && field.empty()) {
        quoted = true;
        any = true;
        continue;
      }
      if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        any = true;
        continue;
      }
      if (c == '\r') {
        if (in.peek() == '\n') in.get();
        ++line;
        break;
      }
      if (c == '\n') {
        ++line;
        break;
      }
      if (c == EOF) break;
      field.push_back(static_cast<char>(c));
      any = true;
    }
    fields.push_back(std::move(field));
    if (any || fields.size() > 1) return true;
  }
  return false;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trimmed(header[i]) == name) return i;
  }
  throw ValidationError("missing column: " + name);
}

}  // namespace

CategoryCodec::CategoryCodec(std::string column) : column_(std::move(column)) {
  if (column_.empty()) throw ValidationError("codec column must be non-empty");
}

CategoryCodec::CategoryCodec(std::string column,
                             std::vector<std::pair<std::string, int>> codes)
    : column_(std::move(column)), codes_(std::move(codes)) {
  if (column_.empty()) throw ValidationError("codec column must be non-empty");
  std::unordered_set<std::string> names;
  std::unordered_set<int> values;
  for (const auto& [category, code] : codes_) {
    if (!names.insert(category).second) {
      throw ValidationError("duplicate codec category: " + category);
    }
    if (!values.insert(code).second) {
      std::ostringstream msg;
      msg << "duplicate codec code: " << code;
      throw ValidationError(msg.str());
    }
    next_code_ = std::max(next_code_, code + 1);
  }
}

int CategoryCodec::code_for(const std::string& category) {
  const int existing = lookup(category);
  if (existing != -1) return existing;
  codes_.emplace_back(category, next_code_);
  return next_code_++;
}

int CategoryCodec::lookup(const std::string& category) const {
  for (const auto& [name, code] : codes_) {
    if (name == category) return code;
  }
  return -1;
}

ConditionalQuery::ConditionalQuery(
    std::string target_in,
    std::vector<std::pair<std::string, std::string>> filters_in)
    : target(std::move(target_in)), filters(std::move(filters_in)) {
  if (target.empty()) throw ValidationError("target column must be non-empty");
  for (const auto& [column, value] : filters) {
    (void)value;
    if (column == target) {
      throw ValidationError("target column may not appear among filters: " +
                            column);
    }
  }
}

ExtractResult extract_conditional(const std::string& csv_path,
                                  const ConditionalQuery& query,
                                  CategoryCodec& codec) {
  if (codec.column() != query.target) {
    throw ValidationError("codec column '" + codec.column() +
                          "' does not match target '" + query.target + "'");
  }
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file: " + csv_path);

  std::uint64_t line = 1, record_line = 1;
  std::vector<std::string> header;
  if (!read_record(in, header, line, record_line)) {
    throw ValidationError("CSV file has no header row: " + csv_path);
  }
  const std::size_t target_idx = column_index(header, query.target);
  std::vector<std::size_t> filter_idx;
  filter_idx.reserve(query.filters.size());
  for (const auto& [column, value] : query.filters) {
    (void)value;
    filter_idx.push_back(column_index(header, column));
  }

  IngestStats stats;
  std::map<int, std::uint64_t> counts;  // integer counting before division
  std::vector<std::string> row;
  while (read_record(in, row, line, record_line)) {
    ++stats.rows_read;
    if (row.size() != header.size()) {
      std::ostringstream msg;
      msg << "row at line " << record_line << " has " << row.size()
          << " fields, header has " << header.size();
      throw ValidationError(msg.str());
    }
    bool missing = trimmed(row[target_idx]).empty();
    for (std::size_t f = 0; f < filter_idx.size() && !missing; ++f) {
      missing = trimmed(row[filter_idx[f]]).empty();
    }
    if (missing) {
      ++stats.rows_dropped_missing;
      continue;
    }
    bool match = true;
    for (std::size_t f = 0; f < filter_idx.size(); ++f) {
      if (trimmed(row[filter_idx[f]]) != query.filters[f].second) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    ++stats.rows_matched;
    ++counts[codec.code_for(trimmed(row[target_idx]))];
  }
  if (stats.rows_matched == 0) {
    throw ValidationError("filter matched no rows");
  }

  std::vector<double> support, mass;
  support.reserve(counts.size());
  mass.reserve(counts.size());
  for (const auto& [code, count] : counts) {
    support.push_back(static_cast<double>(code));
    mass.push_back(static_cast<double>(count) /
                   static_cast<double>(stats.rows_matched));
  }
  return ExtractResult{DiscreteDistribution(std::move(support), std::move(mass)),
                       stats};
}

SystemConfig build_config(std::vector<UserSpec> users) {
  return SystemConfig(std::move(users));
}

}  // namespace puffercal
