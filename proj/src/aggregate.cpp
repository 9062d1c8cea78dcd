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

#include "mobility/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mobility/error.hpp"

namespace mobility {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summary of empty sample");
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  Summary s;
  s.mean = sum / static_cast<double>(values.size());
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  return s;
}

void RegionDayReducer::add(const RegionKey& region, LocalDate date,
                           const MobilityMetrics& m) {
  Samples& s = groups_[{region, date}];
  s.m_max.push_back(m.m_max);
  s.m_bb.push_back(m.m_bb);
  s.m_ch.push_back(m.m_ch);
}

void RegionDayReducer::merge(RegionDayReducer&& other) {
  for (auto& [key, samples] : other.groups_) {
    Samples& mine = groups_[key];
    mine.m_max.insert(mine.m_max.end(), samples.m_max.begin(), samples.m_max.end());
    mine.m_bb.insert(mine.m_bb.end(), samples.m_bb.begin(), samples.m_bb.end());
    mine.m_ch.insert(mine.m_ch.end(), samples.m_ch.begin(), samples.m_ch.end());
  }
  other.groups_.clear();
}

std::vector<RegionDayStats> RegionDayReducer::finish() const {
  std::vector<RegionDayStats> out;
  out.reserve(groups_.size());
  for (const auto& [key, s] : groups_) {
    RegionDayStats st;
    st.region = key.first;
    st.date = key.second;
    st.samples = s.m_max.size();
    st.m_max = summarize(s.m_max);
    st.m_bb = summarize(s.m_bb);
    st.m_ch = summarize(s.m_ch);
    st.m50 = st.m_max.median;
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<RegionDayStats> reduce_region_day(
    std::span<const RegionDaySample> samples) {
  RegionDayReducer reducer;
  for (const auto& s : samples) reducer.add(s.region, s.date, s.metrics);
  return reducer.finish();
}

void BaselineTable::set(const RegionKey& region, double m50_norm) {
  if (!(m50_norm > 0.0)) return;
  norms_[region] = m50_norm;
}

std::optional<double> BaselineTable::find(const RegionKey& region) const {
  auto it = norms_.find(region);
  if (it == norms_.end()) return std::nullopt;
  return it->second;
}

BaselineTable compute_baseline(std::span<const RegionDayStats> stats,
                               BaselineWindow window) {
  if (window.end < window.start) {
    throw config_error("baseline window ends (" + window.end.iso() +
                       ") before it starts (" + window.start.iso() + ")");
  }
  std::map<RegionKey, std::vector<double>> m50s;
  bool any_in_window = false;
  for (const RegionDayStats& s : stats) {
    if (s.date < window.start || window.end < s.date) continue;
    any_in_window = true;
    if (window.weekdays_only && !s.date.is_weekday()) continue;
    m50s[s.region].push_back(s.m50);
  }
  if (!any_in_window) {
    throw config_error("no data in baseline window " + window.start.iso() +
                       ".." + window.end.iso());
  }
  BaselineTable table(window);
  for (auto& [region, values] : m50s) {
    table.set(region, summarize(std::move(values)).median);
  }
  return table;
}

void apply_index(RegionDayStats& stats, const BaselineTable& baseline) {
  const auto norm = baseline.find(stats.region);
  if (!norm) {
    stats.m50_index.reset();
    stats.pct_change.reset();
    return;
  }
  stats.m50_index = 100.0 * stats.m50 / *norm;
  stats.pct_change = *stats.m50_index - 100.0;
}

void apply_index(std::span<RegionDayStats> stats, const BaselineTable& baseline) {
  for (RegionDayStats& s : stats) apply_index(s, baseline);
}

}  // namespace mobility
