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

// Reference implementation of the device-day measures. Deliberately naive
// and written independently of geo.cpp / metrics.cpp; do not call into them.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mobility/synth.hpp"

namespace mobility {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRadiusKm = 6371.0088;

double radians(double deg) { return deg * kPi / 180.0; }

// atan2 form of the haversine.
double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  const double a = std::sin(radians(lat2 - lat1) * 0.5);
  const double b = std::sin(radians(lon2 - lon1) * 0.5);
  const double h = a * a + std::cos(radians(lat1)) * std::cos(radians(lat2)) * b * b;
  return 2.0 * kRadiusKm * std::atan2(std::sqrt(h), std::sqrt(std::max(0.0, 1.0 - h)));
}

struct Pt {
  double x;
  double y;
};

double orient(const Pt& a, const Pt& b, const Pt& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool between(const Pt& a, const Pt& b, const Pt& c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

// A directed pair (p, q) is a hull edge when no point lies strictly to its
// right and every collinear point lies within the segment. Hull vertices are
// the endpoints of such edges.
std::vector<Pt> extreme_points(const std::vector<Pt>& pts) {
  const std::size_t n = pts.size();
  std::vector<bool> keep(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool edge = true;
      for (std::size_t k = 0; k < n && edge; ++k) {
        if (k == i || k == j) continue;
        const double o = orient(pts[i], pts[j], pts[k]);
        if (o < 0.0 || (o == 0.0 && !between(pts[i], pts[j], pts[k]))) edge = false;
      }
      if (edge) keep[i] = keep[j] = true;
    }
  }
  std::vector<Pt> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(pts[i]);
  }
  return out;
}

double fan_area(std::vector<Pt> v) {
  if (v.size() < 3) return 0.0;
  double cx = 0.0, cy = 0.0;
  for (const Pt& p : v) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(v.size());
  cy /= static_cast<double>(v.size());
  std::sort(v.begin(), v.end(), [&](const Pt& a, const Pt& b) {
    return std::atan2(a.y - cy, a.x - cx) < std::atan2(b.y - cy, b.x - cx);
  });
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) twice += orient(v[0], v[i], v[i + 1]);
  return std::fabs(twice) * 0.5;
}

std::size_t trimmed(std::size_t n, double fraction) {
  const auto ppm = static_cast<std::uint64_t>(std::llround(fraction * 1e6));
  return static_cast<std::size_t>(n * ppm / 1000000);
}

}  // namespace

int oracle_solar_offset(double lon_deg) {
  const double q = lon_deg / 15.0;
  const double mag = std::floor(std::fabs(q) + 0.5);
  return static_cast<int>(q < 0 ? -mag : mag);
}

OracleResult oracle_metrics(std::vector<PositionReport> reports,
                            const MetricsConfig& config) {
  OracleResult res;
  std::sort(reports.begin(), reports.end(),
            [](const PositionReport& a, const PositionReport& b) {
              if (a.epoch_s != b.epoch_s) return a.epoch_s < b.epoch_s;
              if (a.point.lat != b.point.lat) return a.point.lat < b.point.lat;
              if (a.point.lon != b.point.lon) return a.point.lon < b.point.lon;
              return a.accuracy_m < b.accuracy_m;
            });
  const std::size_t n = reports.size();
  if (n == 0 || n < config.min_reports) {
    res.verdict = Eligibility::too_few_reports;
    return res;
  }
  const std::int64_t span = reports.back().epoch_s - reports.front().epoch_s;
  if (static_cast<double>(span) < config.min_span_hours * 3600.0) {
    res.verdict = Eligibility::short_span;
    return res;
  }

  MobilityMetrics m;
  m.report_count = n;
  m.span_hours = static_cast<double>(span) / 3600.0;
  m.canonical_point = reports.front().point;

  // Trimmed maximum distance from the first fix.
  std::vector<double> dist;
  const GeoPoint first = reports.front().point;
  for (const auto& r : reports) {
    dist.push_back(great_circle_km(first.lat, first.lon, r.point.lat, r.point.lon));
  }
  std::sort(dist.begin(), dist.end());
  const std::size_t k = trimmed(n, config.trim_fraction);
  m.m_max = k >= n ? 0.0 : dist[n - 1 - k];

  // Planar coordinates, unwrapped if the set spans the antimeridian.
  double lo = 1e9, hi = -1e9;
  for (const auto& r : reports) {
    lo = std::min(lo, r.point.lon);
    hi = std::max(hi, r.point.lon);
  }
  const bool wrap = hi - lo > 180.0;
  std::vector<Pt> pts;
  for (const auto& r : reports) {
    pts.push_back({wrap && r.point.lon < 0 ? r.point.lon + 360.0 : r.point.lon,
                   r.point.lat});
  }

  double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
  for (const Pt& p : pts) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double a_bb = (max_x - min_x) * (max_y - min_y);

  std::vector<Pt> unique;
  for (const Pt& p : pts) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Pt& u) {
      return u.x == p.x && u.y == p.y;
    });
    if (!seen) unique.push_back(p);
  }
  const double a_ch = fan_area(extreme_points(unique));

  long double lat_sum = 0.0L;
  for (auto it = reports.rbegin(); it != reports.rend(); ++it) lat_sum += it->point.lat;
  const double mean_lat = static_cast<double>(lat_sum / static_cast<long double>(n));
  const double c = std::cos(radians(mean_lat));

  m.a_bb = DegreeArea(a_bb);
  m.a_ch = DegreeArea(a_ch);
  m.m_bb = 111.0 * std::sqrt(a_bb) * c;
  m.m_ch = 111.0 * std::sqrt(a_ch) * c;
  res.metrics = m;
  return res;
}

}  // namespace mobility
