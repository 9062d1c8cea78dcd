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
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mobility/calendar.hpp"
#include "mobility/geocode.hpp"
#include "mobility/metrics.hpp"

namespace mobility {

// Linear interpolation between order statistics at p * (n - 1) (the "type 7"
// rule). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

// Exact summary of a non-empty sample. The mean is summed in ascending order
// so the result does not depend on input order.
Summary summarize(std::vector<double> values);

struct RegionDayStats {
  RegionKey region;
  LocalDate date;
  std::size_t samples = 0;
  Summary m_max;
  Summary m_bb;
  Summary m_ch;
  double m50 = 0.0;  // == m_max.median
  std::optional<double> m50_index;
  std::optional<double> pct_change;
};

// Keyed reduction of per device-day metrics into per (region, date) stats.
// Each key keeps its full sample lists so medians are exact.
class RegionDayReducer {
 public:
  void add(const RegionKey& region, LocalDate date, const MobilityMetrics& m);
  void merge(RegionDayReducer&& other);

  // Stats sorted by (region, date).
  std::vector<RegionDayStats> finish() const;

  std::size_t keys() const noexcept { return groups_.size(); }

 private:
  struct Samples {
    std::vector<double> m_max, m_bb, m_ch;
  };
  std::map<std::pair<RegionKey, LocalDate>, Samples> groups_;
};

struct RegionDaySample {
  RegionKey region;
  LocalDate date;
  MobilityMetrics metrics;
};

std::vector<RegionDayStats> reduce_region_day(
    std::span<const RegionDaySample> samples);

inline const LocalDate kDefaultBaselineStart = LocalDate::from_ymd(2020, 2, 17);
inline const LocalDate kDefaultBaselineEnd = LocalDate::from_ymd(2020, 3, 7);

struct BaselineWindow {
  LocalDate start = kDefaultBaselineStart;
  LocalDate end = kDefaultBaselineEnd;
  bool weekdays_only = true;
};

// Region -> m50_norm (km). Only strictly positive norms are stored.
class BaselineTable {
 public:
  BaselineTable() = default;
  explicit BaselineTable(BaselineWindow window) : window_(window) {}

  void set(const RegionKey& region, double m50_norm);
  std::optional<double> find(const RegionKey& region) const;

  const BaselineWindow& window() const noexcept { return window_; }
  const std::map<RegionKey, double>& norms() const noexcept { return norms_; }

 private:
  BaselineWindow window_;
  std::map<RegionKey, double> norms_;
};

// Median of each region's m50 over the window's (week)days. Throws
// Error(config) if start > end or no stats fall inside the window at all.
BaselineTable compute_baseline(std::span<const RegionDayStats> stats,
                               BaselineWindow window = {});

// Fills m50_index = 100 * m50 / m50_norm and pct_change = m50_index - 100,
// or clears both when the region has no baseline.
void apply_index(RegionDayStats& stats, const BaselineTable& baseline);
void apply_index(std::span<RegionDayStats> stats, const BaselineTable& baseline);

}  // namespace mobility
