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

#ifndef PUFFERCAL_INGEST_HPP_
#define PUFFERCAL_INGEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "puffercal/dist.hpp"

namespace puffercal {

// Stable category-string -> integer coding for one column. Codes start at 1
// and follow first appearance unless preloaded from a codes file.
class CategoryCodec {
 public:
  explicit CategoryCodec(std::string column);
  CategoryCodec(std::string column,
                std::vector<std::pair<std::string, int>> codes);

  const std::string& column() const { return column_; }
  // Existing code, or the next unused integer assigned on first sight.
  int code_for(const std::string& category);
  // Existing code only; -1 when the category is unknown.
  int lookup(const std::string& category) const;
  // (category, code) in assignment order.
  const std::vector<std::pair<std::string, int>>& codes() const {
    return codes_;
  }

 private:
  std::string column_;
  std::vector<std::pair<std::string, int>> codes_;
  int next_code_ = 1;
};

// Recipe for an empirical conditional distribution:
// Pr(target = . | every filter column equals its value).
struct ConditionalQuery {
  std::string target;
  std::vector<std::pair<std::string, std::string>> filters;

  ConditionalQuery(std::string target,
                   std::vector<std::pair<std::string, std::string>> filters);
};

struct IngestStats {
  std::uint64_t rows_read = 0;
  std::uint64_t rows_matched = 0;
  std::uint64_t rows_dropped_missing = 0;  // empty target or filter cell
};

struct ExtractResult {
  DiscreteDistribution distribution;
  IngestStats stats;
};

// Streams a CSV file (RFC 4180: quoted fields, embedded commas/newlines,
// first row is the header) and returns the empirical distribution of the
// target's integer codes among rows matching every filter. Counting is done
// in exact integers before the single float division.
ExtractResult extract_conditional(const std::string& csv_path,
                                  const ConditionalQuery& query,
                                  CategoryCodec& codec);

// Assembles and validates a SystemConfig from fully resolved user specs.
SystemConfig build_config(std::vector<UserSpec> users);

}  // namespace puffercal

#endif  // PUFFERCAL_INGEST_HPP_
