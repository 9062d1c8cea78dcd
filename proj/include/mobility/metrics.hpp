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
#include <optional>
#include <span>

#include "mobility/collate.hpp"
#include "mobility/geo.hpp"

namespace mobility {

struct MetricsConfig {
  std::size_t min_reports = 10;
  double min_span_hours = 8.0;
  double trim_fraction = 0.10;
};

enum class Eligibility { eligible, too_few_reports, short_span };

const char* to_string(Eligibility e) noexcept;

// Per device-day mobility measures. Distances in km, areas in square degrees.
struct MobilityMetrics {
  double m_max = 0.0;
  double m_bb = 0.0;
  double m_ch = 0.0;
  DegreeArea a_bb;
  DegreeArea a_ch;
  std::size_t report_count = 0;
  double span_hours = 0.0;
  GeoPoint canonical_point;
};

Eligibility eligibility(const DeviceDay& dd, const MetricsConfig& config = {});

// floor(fraction * n), tolerant of representation error in the fraction
// (0.1 * 30 must give 3, not 2).
std::size_t trim_count(std::size_t n, double fraction) noexcept;

// Largest great-circle distance from the day's first report once the top
// trim_count(n) distances have been discarded.
double max_distance_mobility(const DeviceDay& dd, double trim_fraction = 0.10);

struct BoxHullMobility {
  double m_bb = 0.0;
  double m_ch = 0.0;
  DegreeArea a_bb;
  DegreeArea a_ch;
};

// Both areas are linearised with the mean latitude of the day's reports.
// Trimming does not apply here: every report contributes to both shapes.
BoxHullMobility box_and_hull_mobility(const DeviceDay& dd);

// Location of the first report of the local day.
GeoPoint canonical_position(const DeviceDay& dd);

struct DeviceDayEvaluation {
  Eligibility verdict = Eligibility::eligible;
  std::optional<MobilityMetrics> metrics;  // set iff eligible
};

DeviceDayEvaluation evaluate(const DeviceDay& dd, const MetricsConfig& config = {});

}  // namespace mobility
