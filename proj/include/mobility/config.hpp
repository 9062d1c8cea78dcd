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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mobility/aggregate.hpp"
#include "mobility/calendar.hpp"
#include "mobility/ingest.hpp"
#include "mobility/metrics.hpp"
#include "mobility/synth.hpp"

namespace mobility {

enum class OutputFormat { ndjson, csv, both };

const char* to_string(OutputFormat f) noexcept;

struct DatasetInput {
  std::string name;
  std::vector<std::string> globs;
};

// Every knob of a pipeline run. Keys used by set() and the JSON form are the
// kebab-case names listed in option_keys().
struct PipelineConfig {
  std::vector<DatasetInput> inputs;
  std::filesystem::path gazetteer;
  std::filesystem::path output_dir;
  OutputFormat format = OutputFormat::both;
  double accuracy_max_m = kDefaultAccuracyMaxM;
  std::size_t min_reports = 10;
  double min_span_hours = 8.0;
  double trim_fraction = 0.10;
  LocalDate baseline_start = kDefaultBaselineStart;
  LocalDate baseline_end = kDefaultBaselineEnd;
  std::optional<LocalDate> date_from;
  std::optional<LocalDate> date_to;
  std::size_t workers = 4;
  std::size_t n_buckets = 16;
  std::filesystem::path scratch_dir;  // empty: <output-dir>/.scratch
  bool verbose = false;
  bool emit_device_days = false;

  static const std::vector<std::string>& option_keys();

  // Throws Error(config) for unknown keys or unparsable values. "input"
  // appends a glob to a dataset ("[name=]glob", unnamed globs share the
  // dataset "default"); every other key overwrites.
  void set(std::string_view key, std::string_view value);

  // Applies a JSON object of the same keys; "input" may be a string or an
  // array of strings.
  void merge_json(std::string_view json_text);
  void load_file(const std::filesystem::path& path);

  std::string to_json() const;  // pretty-printed, keys in option_keys() order

  // Range checks on every field; run-only requirements (inputs, paths) too
  // when for_run is set.
  void validate(bool for_run) const;

  IngestConfig ingest() const { return {accuracy_max_m}; }
  MetricsConfig metrics() const { return {min_reports, min_span_hours, trim_fraction}; }
  BaselineWindow baseline() const { return {baseline_start, baseline_end, true}; }
  std::filesystem::path scratch_root() const;
};

// Scenario options use the same key=value scheme:
//   seed, devices, start, end, change-date, post-change-scale,
//   scale (DATE=FACTOR, repeatable), median-distance-km, distance-sigma,
//   daily-jitter, min-reports-per-day, max-reports-per-day,
//   short-span-fraction, missing-day-fraction, inaccurate-fraction,
//   malformed-fraction, unmatched-fraction, shards, gzip, truth,
//   center-lat, center-lon
void set_scenario_option(ScenarioSpec& spec, std::string_view key,
                         std::string_view value);

}  // namespace mobility
