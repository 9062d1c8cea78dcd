// Copyright 2026 The m50 Authors
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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mobility/output.hpp"

namespace mobility {

enum class CompareStatus { both, only_a, only_b };

const char* to_string(CompareStatus s) noexcept;

struct ComparisonRow {
  std::string country_code;
  std::string admin_level;
  std::string admin1;
  std::string admin2;
  std::string region_id;
  std::string date;
  CompareStatus status = CompareStatus::both;
  std::optional<double> m50_a;
  std::optional<double> m50_b;
  std::optional<double> m50_index_a;
  std::optional<double> m50_index_b;
  std::optional<double> delta;  // index b - a, one decimal
};

struct ComparisonSummary {
  std::size_t rows = 0;
  std::size_t both = 0;
  std::size_t only_a = 0;
  std::size_t only_b = 0;
};

// Loads an output file (.ndjson or .csv) together with its column list.
struct LoadedOutput {
  std::vector<std::string> columns;
  std::vector<OutputRecord> records;
};
LoadedOutput load_output(const std::filesystem::path& path);

// Full outer join on (country_code, admin_level, admin1, admin2, region_id,
// date). Throws Error(data) when the two column lists differ.
std::vector<ComparisonRow> compare_outputs(const LoadedOutput& a,
                                           const LoadedOutput& b);

std::string to_ndjson_line(const ComparisonRow& row);

ComparisonSummary compare_files(const std::filesystem::path& a,
                                const std::filesystem::path& b,
                                const std::filesystem::path& out);

}  // namespace mobility
