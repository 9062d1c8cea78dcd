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

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mobility/geo.hpp"

namespace mobility {

struct RegionKey {
  std::string country_code;  // ISO 3166-1 alpha-2
  std::string admin1;
  std::string admin2;        // non-empty implies admin1 non-empty
  std::string region_id;

  friend auto operator<=>(const RegionKey&, const RegionKey&) = default;
  friend bool operator==(const RegionKey&, const RegionKey&) = default;
};

enum class AdminLevel { country = 0, admin1 = 1, admin2 = 2 };

AdminLevel admin_level(const RegionKey& key) noexcept;
const char* to_string(AdminLevel level) noexcept;

struct BoundingBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  bool contains(GeoPoint p) const noexcept {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat &&
           p.lat <= max_lat;
  }
  double area() const noexcept {
    return (max_lon - min_lon) * (max_lat - min_lat);
  }
};

// Closed ring of (lon, lat) vertices: front() == back().
using Ring = std::vector<PlanarPoint>;

struct Region {
  RegionKey key;
  std::vector<Ring> rings;  // outer boundaries and holes, combined even-odd
  BoundingBox bbox;
  std::optional<int> utc_offset_hours;
};

struct Place {
  std::string name;
  GeoPoint point;
  std::string region_id;
};

// Point-in-ring test, boundary inclusive.
bool ring_contains(std::span<const PlanarPoint> ring, PlanarPoint p) noexcept;

// Even-odd rule over all of the region's rings; a point on any ring's
// boundary counts as inside.
bool region_contains(const Region& region, GeoPoint p) noexcept;

// Administrative polygons and populated places, immutable once loaded.
//
// File format: newline-delimited JSON, one record per line.
//   {"type":"region","country_code":"US","admin1":"...","admin2":"...",
//    "region_id":"...","utc_offset_hours":-5,
//    "polygons":[[[lon,lat],...],...]}
//   {"type":"place","name":"...","lat":..,"lon":..,"region_id":"..."}
// Blank lines are ignored. Places may precede the region they reference.
class Gazetteer {
 public:
  static Gazetteer load(const std::filesystem::path& path);
  static Gazetteer parse(std::istream& in, const std::string& source_name);

  // Validates key and geometry and computes the bounding box. Throws
  // Error(data) naming the region on any problem.
  void add_region(RegionKey key, std::vector<Ring> rings,
                  std::optional<int> utc_offset_hours = std::nullopt);
  void add_place(Place place);

  // Referential checks that need the whole file (place -> region).
  void validate() const;

  const std::vector<Region>& regions() const noexcept { return regions_; }
  const std::vector<Place>& places() const noexcept { return places_; }

  const Region* find(std::string_view region_id) const;

  // Deepest admin level wins; ties go to the smaller bounding box, then the
  // smaller region id.
  const Region* locate(GeoPoint p) const;

  // The admin1 key an admin1 or admin2 key aggregates into. When the file
  // has no admin1 polygon, the id is synthesised as "<country>.<admin1>".
  RegionKey admin1_rollup(const RegionKey& key) const;

 private:
  std::vector<Region> regions_;
  std::vector<Place> places_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::pair<std::string, std::string>, std::size_t> admin1_index_;
};

std::optional<RegionKey> reverse_geocode(const Gazetteer& g, GeoPoint p);

// Nearest place within max_km by great-circle distance; ties by name.
std::optional<std::string> nearest_place(const Gazetteer& g, GeoPoint p,
                                         double max_km);

}  // namespace mobility
