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

// Spherical distance, solar time and planar (lon, lat) area helpers.
//
// Everything in here is a pure function of its arguments.

#pragma once

#include <compare>
#include <optional>
#include <span>
#include <vector>

namespace mobility {

// IUGG mean Earth radius.
inline constexpr double kEarthMeanRadiusKm = 6371.0088;

// Kilometres per degree used when linearising degree areas.
inline constexpr double kKmPerDegree = 111.0;

struct GeoPoint {
  double lat = 0.0;  // [-90, 90]
  double lon = 0.0;  // [-180, 180)

  friend constexpr bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Validates and normalises a coordinate pair. Longitude 180 is folded to -180;
// anything outside [-90, 90] x [-180, 180] or non-finite is rejected.
std::optional<GeoPoint> make_geo_point(double lat, double lon) noexcept;

// A point in the plane with x = longitude and y = latitude, both in degrees.
// Longitudes may exceed 180 after antimeridian unwrapping.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend constexpr auto operator<=>(const PlanarPoint&,
                                    const PlanarPoint&) = default;
};

// Area in square degrees of longitude x latitude.
class DegreeArea {
 public:
  constexpr DegreeArea() = default;
  constexpr explicit DegreeArea(double square_degrees)
      : value_(square_degrees) {}

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(DegreeArea, DegreeArea) = default;

 private:
  double value_ = 0.0;
};

double haversine_km(GeoPoint a, GeoPoint b) noexcept;

// round(lon / 15), halves rounded away from zero.
int solar_tz_offset_hours(double lon_deg) noexcept;

// Projects points onto the (lon, lat) plane. When the raw longitude span is
// wider than 180 degrees the set is assumed to straddle the antimeridian and
// every negative longitude is shifted by +360.
std::vector<PlanarPoint> to_planar(std::span<const GeoPoint> points);

// (max lat - min lat) * (max lon - min lon) after unwrapping.
// Throws std::invalid_argument("no points") on empty input.
DegreeArea bounding_box_area(std::span<const GeoPoint> points);

// Andrew's monotone chain. Returns the hull counterclockwise, starting at the
// lexicographically smallest (x, y) vertex. Duplicates and collinear boundary
// points are dropped, so degenerate inputs give 0, 1 or 2 vertices.
std::vector<PlanarPoint> convex_hull(std::span<const PlanarPoint> points);
std::vector<PlanarPoint> convex_hull(std::span<const GeoPoint> points);

// Shoelace area of a simple polygon; fewer than 3 vertices gives zero.
DegreeArea polygon_area(std::span<const PlanarPoint> vertices);

// 111 * sqrt(area) * cos(lat). The cosine sits outside the root.
double area_to_linear_km(DegreeArea area, double lat_deg) noexcept;

}  // namespace mobility
