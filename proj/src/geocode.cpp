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

#include "mobility/geocode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <tuple>

#include <json.hpp>

#include "mobility/error.hpp"

namespace mobility {

namespace {

using nlohmann::json;

bool valid_country_code(const std::string& cc) {
  return cc.size() == 2 && cc[0] >= 'A' && cc[0] <= 'Z' && cc[1] >= 'A' &&
         cc[1] <= 'Z';
}

bool on_segment(PlanarPoint a, PlanarPoint b, PlanarPoint p) noexcept {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (cross != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

// Half-open crossing test for a ray towards +x.
bool crosses(PlanarPoint a, PlanarPoint b, PlanarPoint p) noexcept {
  if ((a.y > p.y) == (b.y > p.y)) return false;
  const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
  return p.x < x;
}

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  return it->get<std::string>();
}

}  // namespace

AdminLevel admin_level(const RegionKey& key) noexcept {
  if (!key.admin2.empty()) return AdminLevel::admin2;
  if (!key.admin1.empty()) return AdminLevel::admin1;
  return AdminLevel::country;
}

const char* to_string(AdminLevel level) noexcept {
  switch (level) {
    case AdminLevel::country:
      return "country";
    case AdminLevel::admin1:
      return "admin1";
    case AdminLevel::admin2:
      return "admin2";
  }
  return "unknown";
}

bool ring_contains(std::span<const PlanarPoint> ring, PlanarPoint p) noexcept {
  bool inside = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (on_segment(ring[i], ring[i + 1], p)) return true;
    if (crosses(ring[i], ring[i + 1], p)) inside = !inside;
  }
  return inside;
}

bool region_contains(const Region& region, GeoPoint p) noexcept {
  const PlanarPoint q{p.lon, p.lat};
  bool inside = false;
  for (const Ring& ring : region.rings) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      if (on_segment(ring[i], ring[i + 1], q)) return true;
      if (crosses(ring[i], ring[i + 1], q)) inside = !inside;
    }
  }
  return inside;
}

void Gazetteer::add_region(RegionKey key, std::vector<Ring> rings,
                           std::optional<int> utc_offset_hours) {
  const std::string who = "region '" + key.region_id + "'";
  if (key.region_id.empty()) throw data_error("region with empty region_id");
  if (!valid_country_code(key.country_code)) {
    throw data_error(who + ": country_code must be 2 uppercase letters");
  }
  if (!key.admin2.empty() && key.admin1.empty()) {
    throw data_error(who + ": admin2 set without admin1");
  }
  if (by_id_.count(key.region_id) != 0) {
    throw data_error(who + ": duplicate region_id");
  }
  if (rings.empty()) throw data_error(who + ": no polygons");

  Region region;
  region.bbox = {std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
  for (const Ring& ring : rings) {
    if (ring.size() < 4) {
      throw data_error(who + ": ring has fewer than 4 points");
    }
    if (ring.front() != ring.back()) throw data_error(who + ": ring not closed");
    for (const PlanarPoint& v : ring) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y) || v.y < -90.0 ||
          v.y > 90.0 || v.x < -180.0 || v.x > 180.0) {
        throw data_error(who + ": vertex out of range");
      }
      region.bbox.min_lon = std::min(region.bbox.min_lon, v.x);
      region.bbox.max_lon = std::max(region.bbox.max_lon, v.x);
      region.bbox.min_lat = std::min(region.bbox.min_lat, v.y);
      region.bbox.max_lat = std::max(region.bbox.max_lat, v.y);
    }
  }
  region.key = std::move(key);
  region.rings = std::move(rings);
  region.utc_offset_hours = utc_offset_hours;

  const std::size_t index = regions_.size();
  by_id_.emplace(region.key.region_id, index);
  if (admin_level(region.key) == AdminLevel::admin1) {
    admin1_index_.emplace(
        std::make_pair(region.key.country_code, region.key.admin1), index);
  }
  regions_.push_back(std::move(region));
}

void Gazetteer::add_place(Place place) {
  if (place.name.empty()) throw data_error("place with empty name");
  places_.push_back(std::move(place));
}

void Gazetteer::validate() const {
  for (const Place& place : places_) {
    if (find(place.region_id) == nullptr) {
      throw data_error("place '" + place.name + "' references unknown region '" +
                       place.region_id + "'");
    }
  }
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open gazetteer '" + path.string() + "'");
  return parse(in, path.string());
}

Gazetteer Gazetteer::parse(std::istream& in, const std::string& source_name) {
  Gazetteer g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    try {
      const json rec = json::parse(line);
      const std::string type = string_field(rec, "type");
      if (type == "region") {
        RegionKey key{string_field(rec, "country_code"),
                      string_field(rec, "admin1"), string_field(rec, "admin2"),
                      string_field(rec, "region_id")};
        std::vector<Ring> rings;
        for (const json& poly : rec.at("polygons")) {
          Ring ring;
          for (const json& v : poly) {
            if (v.size() != 2) {
              throw data_error("region '" + key.region_id +
                               "': vertex must be [lon, lat]");
            }
            ring.push_back({v[0].get<double>(), v[1].get<double>()});
          }
          rings.push_back(std::move(ring));
        }
        std::optional<int> offset;
        if (auto it = rec.find("utc_offset_hours");
            it != rec.end() && !it->is_null()) {
          offset = it->get<int>();
        }
        g.add_region(std::move(key), std::move(rings), offset);
      } else if (type == "place") {
        const auto point =
            make_geo_point(rec.at("lat").get<double>(), rec.at("lon").get<double>());
        if (!point) throw data_error("place coordinates out of range");
        g.add_place({string_field(rec, "name"), *point,
                     string_field(rec, "region_id")});
      } else {
        throw data_error("unknown record type '" + type + "'");
      }
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    } catch (const json::exception& e) {
      throw data_error(where + ": " + e.what());
    }
  }
  g.validate();
  return g;
}

const Region* Gazetteer::find(std::string_view region_id) const {
  auto it = by_id_.find(region_id);
  return it == by_id_.end() ? nullptr : &regions_[it->second];
}

const Region* Gazetteer::locate(GeoPoint p) const {
  const Region* best = nullptr;
  for (const Region& r : regions_) {
    if (!r.bbox.contains(p) || !region_contains(r, p)) continue;
    if (best == nullptr) {
      best = &r;
      continue;
    }
    const auto rank = [](const Region& x) {
      return std::make_tuple(-static_cast<int>(admin_level(x.key)), x.bbox.area(),
                             std::cref(x.key.region_id));
    };
    if (rank(r) < rank(*best)) best = &r;
  }
  return best;
}

RegionKey Gazetteer::admin1_rollup(const RegionKey& key) const {
  auto it = admin1_index_.find({key.country_code, key.admin1});
  if (it != admin1_index_.end()) return regions_[it->second].key;
  return {key.country_code, key.admin1, "", key.country_code + "." + key.admin1};
}

std::optional<RegionKey> reverse_geocode(const Gazetteer& g, GeoPoint p) {
  const Region* r = g.locate(p);
  if (r == nullptr) return std::nullopt;
  return r->key;
}

std::optional<std::string> nearest_place(const Gazetteer& g, GeoPoint p,
                                         double max_km) {
  const Place* best = nullptr;
  double best_d = 0.0;
  for (const Place& place : g.places()) {
    const double d = haversine_km(p, place.point);
    if (d > max_km) continue;
    if (best == nullptr || d < best_d || (d == best_d && place.name < best->name)) {
      best = &place;
      best_d = d;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->name;
}

}  // namespace mobility
