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

#include "mobility/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mobility {

namespace {

std::vector<GeoPoint> points_of(const DeviceDay& dd) {
  std::vector<GeoPoint> pts;
  pts.reserve(dd.reports.size());
  for (const auto& r : dd.reports) pts.push_back(r.point);
  return pts;
}

double span_hours(const DeviceDay& dd) {
  if (dd.reports.empty()) return 0.0;
  return static_cast<double>(dd.reports.back().epoch_s -
                             dd.reports.front().epoch_s) /
         3600.0;
}

}  // namespace

const char* to_string(Eligibility e) noexcept {
  switch (e) {
    case Eligibility::eligible:
      return "eligible";
    case Eligibility::too_few_reports:
      return "too_few_reports";
    case Eligibility::short_span:
      return "short_span";
  }
  return "unknown";
}

Eligibility eligibility(const DeviceDay& dd, const MetricsConfig& config) {
  if (dd.reports.empty() || dd.reports.size() < config.min_reports) {
    return Eligibility::too_few_reports;
  }
  // Compare in whole seconds so an exact 8 h span is not lost to rounding.
  const std::int64_t span_s =
      dd.reports.back().epoch_s - dd.reports.front().epoch_s;
  if (static_cast<double>(span_s) < config.min_span_hours * 3600.0) {
    return Eligibility::short_span;
  }
  return Eligibility::eligible;
}

std::size_t trim_count(std::size_t n, double fraction) noexcept {
  if (!(fraction > 0.0)) return 0;
  const double raw = fraction * static_cast<double>(n);
  const auto k = static_cast<std::size_t>(std::floor(raw + 1e-9));
  return std::min(k, n);
}

double max_distance_mobility(const DeviceDay& dd, double trim_fraction) {
  const std::size_t n = dd.reports.size();
  if (n == 0) return 0.0;
  const GeoPoint anchor = dd.reports.front().point;
  std::vector<double> d;
  d.reserve(n);
  for (const auto& r : dd.reports) d.push_back(haversine_km(anchor, r.point));
  const std::size_t k = trim_count(n, trim_fraction);
  if (k >= n) return 0.0;
  // Element n-1-k in ascending order is the max after dropping the top k.
  auto kept = d.begin() + static_cast<std::ptrdiff_t>(n - 1 - k);
  std::nth_element(d.begin(), kept, d.end());
  return *kept;
}

BoxHullMobility box_and_hull_mobility(const DeviceDay& dd) {
  if (dd.reports.empty()) throw std::invalid_argument("empty device-day");
  const auto pts = points_of(dd);
  double lat_sum = 0.0;
  for (const GeoPoint& p : pts) lat_sum += p.lat;
  const double mean_lat = lat_sum / static_cast<double>(pts.size());

  BoxHullMobility out;
  out.a_bb = bounding_box_area(pts);
  const auto hull = convex_hull(std::span<const GeoPoint>(pts));
  // The hull lies inside the box; clamp shoelace roundoff.
  out.a_ch = std::min(polygon_area(hull), out.a_bb);
  out.m_bb = area_to_linear_km(out.a_bb, mean_lat);
  out.m_ch = area_to_linear_km(out.a_ch, mean_lat);
  return out;
}

GeoPoint canonical_position(const DeviceDay& dd) {
  if (dd.reports.empty()) throw std::invalid_argument("empty device-day");
  return dd.reports.front().point;
}

DeviceDayEvaluation evaluate(const DeviceDay& dd, const MetricsConfig& config) {
  DeviceDayEvaluation out;
  out.verdict = eligibility(dd, config);
  if (out.verdict != Eligibility::eligible) return out;

  MobilityMetrics m;
  m.m_max = max_distance_mobility(dd, config.trim_fraction);
  const BoxHullMobility bh = box_and_hull_mobility(dd);
  m.m_bb = bh.m_bb;
  m.m_ch = bh.m_ch;
  m.a_bb = bh.a_bb;
  m.a_ch = bh.a_ch;
  m.report_count = dd.reports.size();
  m.span_hours = span_hours(dd);
  m.canonical_point = canonical_position(dd);
  out.metrics = m;
  return out;
}

}  // namespace mobility
