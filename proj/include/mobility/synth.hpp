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

// Seeded synthetic trajectories and an independent reference implementation
// of the per device-day measures, for checking the pipeline without vendor
// data.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mobility/calendar.hpp"
#include "mobility/ingest.hpp"
#include "mobility/metrics.hpp"

namespace mobility {

// Portable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distributions are implemented here
// because the standard library's are not reproducible across vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  std::uint64_t below(std::uint64_t n);  // [0, n), unbiased
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // [lo, hi]
  double normal();                     // Box-Muller
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Reference measures

struct OracleResult {
  Eligibility verdict = Eligibility::eligible;
  std::optional<MobilityMetrics> metrics;
};

// Slow, self-contained recomputation of eligibility and metrics for the
// reports of one device-day (any order). Shares no geometry code with the
// pipeline: O(n^3) extreme-edge hull, fan-triangulated area, its own
// haversine and antimeridian handling.
OracleResult oracle_metrics(std::vector<PositionReport> reports,
                            const MetricsConfig& config = {});

// round(lon / 15) with halves away from zero, computed without std::round.
int oracle_solar_offset(double lon_deg);

// ---------------------------------------------------------------------------
// Randomised device-days for oracle comparison

enum class DeviceDayShape {
  scatter,          // random fixes in a small neighbourhood
  duplicates,       // few distinct fixes, many repeats
  collinear,        // exactly collinear on a dyadic grid
  antimeridian,     // straddles lon = +-180
  sparse,           // fewer than 10 reports
  short_span,       // under 8 hours
  exact_threshold,  // exactly 10 reports over exactly 8 hours
};

inline constexpr DeviceDayShape kAllShapes[] = {
    DeviceDayShape::scatter,      DeviceDayShape::duplicates,
    DeviceDayShape::collinear,    DeviceDayShape::antimeridian,
    DeviceDayShape::sparse,       DeviceDayShape::short_span,
    DeviceDayShape::exact_threshold};

const char* to_string(DeviceDayShape shape) noexcept;

// Reports of a single device that all fall in one local day under the
// device's first-report offset.
std::vector<PositionReport> random_device_day(Rng& rng, DeviceDayShape shape,
                                              const std::string& device_id);

// ---------------------------------------------------------------------------
// Scenario generation

struct ScenarioSpec {
  std::uint64_t seed = 42;
  std::size_t devices = 300;
  LocalDate start = LocalDate::from_ymd(2020, 2, 17);
  LocalDate end = LocalDate::from_ymd(2020, 3, 31);

  // Mobility scale is 1 before change_date and post_change_scale from it on,
  // unless a date has an explicit override.
  LocalDate change_date = LocalDate::from_ymd(2020, 3, 16);
  double post_change_scale = 0.3;
  std::map<LocalDate, double> scale_overrides;

  // Per-device destination distance is lognormal with this median.
  double median_distance_km = 5.2;
  double distance_sigma = 0.5;
  double daily_jitter = 0.05;  // relative, uniform +-

  int min_reports_per_day = 8;
  int max_reports_per_day = 40;
  double short_span_fraction = 0.08;
  double missing_day_fraction = 0.05;
  double inaccurate_fraction = 0.05;
  double malformed_fraction = 0.0;  // extra garbage lines per good line
  double unmatched_fraction = 0.02; // devices living outside every region

  std::size_t shards = 4;
  bool gzip = false;
  bool write_truth = true;

  // Centre of the toy gazetteer.
  double center_lat = 40.7;
  double center_lon = -74.0;

  double scale_on(LocalDate date) const;
  void validate() const;  // throws Error(config)
};

struct GeneratedScenario {
  std::vector<std::filesystem::path> shards;
  std::filesystem::path gazetteer;
  std::filesystem::path truth;  // empty when write_truth is false
  std::uint64_t data_lines = 0;       // every line but shard headers
  std::uint64_t malformed_lines = 0;
  std::uint64_t rejected_accuracy = 0;
  std::uint64_t accepted = 0;
  std::uint64_t truth_device_days = 0;
};

// Writes shard-NNN.csv[.gz], gazetteer.ndjson and truth.ndjson into dir.
// Output bytes are a pure function of the spec.
GeneratedScenario generate(const ScenarioSpec& spec,
                           const std::filesystem::path& dir);

// The toy gazetteer used by generate(): one country, two admin1 regions side
// by side, each split into two admin2 regions, plus a place per admin2.
std::string toy_gazetteer_ndjson(double center_lat, double center_lon);

}  // namespace mobility
