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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mobility/config.hpp"
#include "mobility/geocode.hpp"
#include "mobility/ingest.hpp"

namespace mobility {

// Counters for one dataset. Every device-day lands in exactly one of
// out_of_range, too_few_reports, short_span or eligible; every eligible one
// is either geocoded (one admin1 sample) or unmatched.
struct DatasetReport {
  std::string dataset;
  std::uint64_t shards = 0;
  IngestStats ingest;
  std::uint64_t device_days = 0;
  std::uint64_t device_day_reports = 0;
  std::uint64_t out_of_range = 0;
  std::uint64_t too_few_reports = 0;
  std::uint64_t short_span = 0;
  std::uint64_t eligible = 0;
  std::uint64_t unmatched_geocode = 0;
  std::uint64_t admin1_samples = 0;
  std::uint64_t admin2_samples = 0;
  std::uint64_t rows_admin1 = 0;
  std::uint64_t rows_admin2 = 0;
  std::uint64_t rows_with_index = 0;
  std::uint64_t regions = 0;
  std::uint64_t regions_with_baseline = 0;

  bool reconciles() const noexcept;
  std::string to_json_line() const;
  static DatasetReport from_json_line(const std::string& line);
};

struct RunResult {
  std::vector<DatasetReport> datasets;
  std::vector<std::filesystem::path> outputs;  // every file written
};

// Shell-style glob expansion, sorted. Patterns without wildcards must name an
// existing file. Throws Error(io) when nothing matches.
std::vector<std::filesystem::path> expand_inputs(const DatasetInput& input);

// Processes one dataset into out_dir (created if needed).
DatasetReport run_dataset(const PipelineConfig& config, const DatasetInput& input,
                          const Gazetteer& gazetteer,
                          const std::filesystem::path& out_dir,
                          std::vector<std::filesystem::path>* written = nullptr);

// Full run: every dataset under <output-dir>/<name>/, the combined
// run_report.ndjson and, for two or more datasets, one comparison file per
// later dataset against the first.
RunResult run_pipeline(const PipelineConfig& config);

}  // namespace mobility
