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

#include "mobility/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mobility {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// > 0 when o -> a -> b turns counterclockwise.
double cross(const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::optional<GeoPoint> make_geo_point(double lat, double lon) noexcept {
  if (!std::isfinite(lat) || !std::isfinite(lon)) return std::nullopt;
  if (lat < -90.0 || lat > 90.0) return std::nullopt;
  if (lon < -180.0 || lon > 180.0) return std::nullopt;
  if (lon == 180.0) lon = -180.0;
  return GeoPoint{lat, lon};
}

double haversine_km(GeoPoint a, GeoPoint b) noexcept {
  // Differences are taken in degrees first; that is exact for nearby points.
  const double sin_dlat = std::sin((b.lat - a.lat) * kDegToRad / 2.0);
  const double sin_dlon = std::sin((b.lon - a.lon) * kDegToRad / 2.0);
  double h = sin_dlat * sin_dlat + std::cos(a.lat * kDegToRad) *
                                       std::cos(b.lat * kDegToRad) * sin_dlon *
                                       sin_dlon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthMeanRadiusKm * std::asin(std::sqrt(h));
}

int solar_tz_offset_hours(double lon_deg) noexcept {
  // std::round rounds halfway cases away from zero.
  return static_cast<int>(std::round(lon_deg / 15.0));
}

std::vector<PlanarPoint> to_planar(std::span<const GeoPoint> points) {
  std::vector<PlanarPoint> out;
  out.reserve(points.size());
  if (points.empty()) return out;
  const auto [lo, hi] = std::minmax_element(
      points.begin(), points.end(),
      [](const GeoPoint& a, const GeoPoint& b) { return a.lon < b.lon; });
  const bool wrap = hi->lon - lo->lon > 180.0;
  for (const GeoPoint& p : points) {
    const double x = (wrap && p.lon < 0.0) ? p.lon + 360.0 : p.lon;
    out.push_back({x, p.lat});
  }
  return out;
}

DegreeArea bounding_box_area(std::span<const GeoPoint> points) {
  if (points.empty()) throw std::invalid_argument("no points");
  const auto planar = to_planar(points);
  double min_x = planar[0].x, max_x = planar[0].x;
  double min_y = planar[0].y, max_y = planar[0].y;
  for (const PlanarPoint& p : planar) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return DegreeArea((max_y - min_y) * (max_x - min_x));
}

std::vector<PlanarPoint> convex_hull(std::span<const PlanarPoint> points) {
  std::vector<PlanarPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<PlanarPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const PlanarPoint& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  // The last vertex repeats the first.
  hull.resize(k - 1);
  return hull;
}

std::vector<PlanarPoint> convex_hull(std::span<const GeoPoint> points) {
  const auto planar = to_planar(points);
  return convex_hull(std::span<const PlanarPoint>(planar));
}

DegreeArea polygon_area(std::span<const PlanarPoint> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return DegreeArea(0.0);
  // Trapezoid form of the shoelace sum, with y measured from the first vertex
  // to keep the terms small.
  const double y0 = vertices[0].y;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PlanarPoint& a = vertices[i];
    const PlanarPoint& b = vertices[(i + 1) % n];
    twice += (a.x - b.x) * ((a.y - y0) + (b.y - y0));
  }
  return DegreeArea(std::abs(twice) / 2.0);
}

double area_to_linear_km(DegreeArea area, double lat_deg) noexcept {
  return kKmPerDegree * std::sqrt(area.value()) * std::cos(lat_deg * kDegToRad);
}

}  // namespace mobility
