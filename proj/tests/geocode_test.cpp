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

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "mobility/error.hpp"
#include "mobility/synth.hpp"
#include "test_util.hpp"

namespace mobility {
namespace {

Ring square(double lon0, double lat0, double size) {
  return {{lon0, lat0}, {lon0 + size, lat0}, {lon0 + size, lat0 + size},
          {lon0, lat0 + size}, {lon0, lat0}};
}

std::string region_line(const std::string& id, const std::string& cc, const std::string& a1,
                        const std::string& a2, double lon0, double lat0, double size) {
  std::ostringstream os;
  os.precision(17);
  os << R"({"type":"region","region_id":")" << id << R"(","country_code":")" << cc
     << R"(","admin1":")" << a1 << R"(","admin2":")" << a2 << R"(","polygons":[[)";
  const Ring r = square(lon0, lat0, size);
  for (std::size_t i = 0; i < r.size(); ++i) {
    os << (i ? "," : "") << '[' << r[i].x << ',' << r[i].y << ']';
  }
  os << "]]}\n";
  return os.str();
}

Gazetteer parse(const std::string& text) {
  std::istringstream in(text);
  return Gazetteer::parse(in, "test");
}

// Winding number of a closed ring around p, by summed signed angles.
int winding_number(const Ring& ring, PlanarPoint p) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const double a1 = std::atan2(ring[i].y - p.y, ring[i].x - p.x);
    const double a2 = std::atan2(ring[i + 1].y - p.y, ring[i + 1].x - p.x);
    double d = a2 - a1;
    while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
    while (d < -std::numbers::pi) d += 2 * std::numbers::pi;
    total += d;
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

TEST(Gazetteer, SingleSquare) {
  const Gazetteer g = parse(region_line("1", "US", "A", "", -75, 40, 1));
  ASSERT_EQ(g.regions().size(), 1u);
  const BoundingBox& b = g.regions()[0].bbox;
  EXPECT_EQ(b.min_lon, -75);
  EXPECT_EQ(b.max_lon, -74);
  EXPECT_EQ(b.min_lat, 40);
  EXPECT_EQ(b.max_lat, 41);
}

TEST(Gazetteer, OpenRingNamesRegion) {
  const std::string text =
      R"({"type":"region","region_id":"r-open","country_code":"US","admin1":"A","admin2":"","polygons":[[[0,0],[1,0],[1,1],[0,1]]]})"
      "\n";
  try {
    parse(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
    EXPECT_NE(std::string(e.what()).find("r-open"), std::string::npos) << e.what();
  }
}

TEST(Gazetteer, TooFewRingPoints) {
  const std::string text =
      R"({"type":"region","region_id":"tiny","country_code":"US","admin1":"A","admin2":"","polygons":[[[0,0],[1,0],[0,0]]]})"
      "\n";
  EXPECT_THROW(parse(text), Error);
}

TEST(Gazetteer, PlaceWithUnknownRegion) {
  const std::string text = region_line("1", "US", "A", "", 0, 0, 1) +
                           R"({"type":"place","name":"Nowhere","lat":0.5,"lon":0.5,"region_id":"2"})" "\n";
  EXPECT_THROW(parse(text), Error);
}

TEST(Gazetteer, DuplicateRegionId) {
  EXPECT_THROW(parse(region_line("1", "US", "A", "", 0, 0, 1) + region_line("1", "US", "B", "", 2, 0, 1)),
               Error);
}

TEST(Gazetteer, MissingFileIsIoError) {
  testing::TempDir dir;
  try {
    Gazetteer::load(dir / "nope.ndjson");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
    EXPECT_NE(std::string(e.what()).find("nope.ndjson"), std::string::npos);
  }
}

TEST(ReverseGeocode, Hierarchy) {
  const Gazetteer g = parse(region_line("10", "US", "State", "", 0, 0, 2) +
                            region_line("10001", "US", "State", "County", 0, 0, 1) +
                            region_line("0", "US", "", "", -10, -10, 30));
  auto k = reverse_geocode(g, {0.5, 0.5});
  ASSERT_TRUE(k);
  EXPECT_EQ(k->region_id, "10001");
  EXPECT_EQ(admin_level(*k), AdminLevel::admin2);
  k = reverse_geocode(g, {1.5, 1.5});
  ASSERT_TRUE(k);
  EXPECT_EQ(k->region_id, "10");
  EXPECT_EQ(k->admin2, "");
  k = reverse_geocode(g, {5, 5});
  ASSERT_TRUE(k);
  EXPECT_EQ(admin_level(*k), AdminLevel::country);
  EXPECT_FALSE(reverse_geocode(g, {50, 50}));
}

TEST(ReverseGeocode, BoundaryIsInside) {
  const Gazetteer g = parse(region_line("1", "US", "A", "", 0, 0, 1));
  EXPECT_TRUE(reverse_geocode(g, {0, 0.5}));
  EXPECT_TRUE(reverse_geocode(g, {1, 1}));
  EXPECT_FALSE(reverse_geocode(g, {1.0000001, 1}));
}

TEST(ReverseGeocode, HolesUseEvenOdd) {
  Gazetteer g;
  g.add_region({"US", "A", "", "1"}, {square(0, 0, 4), square(1, 1, 2)});
  EXPECT_TRUE(reverse_geocode(g, {0.5, 0.5}));
  EXPECT_FALSE(reverse_geocode(g, {2, 2}));
}

TEST(Admin1Rollup, SynthesisedWhenNoPolygon) {
  const Gazetteer g = parse(region_line("5001", "US", "Lone", "County", 0, 0, 1));
  const RegionKey k = g.admin1_rollup(g.regions()[0].key);
  EXPECT_EQ(k.admin1, "Lone");
  EXPECT_EQ(k.admin2, "");
  EXPECT_EQ(k.region_id, "US.Lone");
}

TEST(NearestPlace, Examples) {
  Gazetteer g;
  g.add_region({"US", "A", "", "1"}, {square(-1, -1, 2)});
  g.add_place({"Origin", {0, 0}, "1"});
  const double one_km_deg = 1.0 / 111.195;
  EXPECT_EQ(nearest_place(g, {one_km_deg, 0}, 5).value_or(""), "Origin");
  EXPECT_FALSE(nearest_place(g, {10 * one_km_deg, 0}, 5));
  g.add_place({"Beta", {0.02, 0}, "1"});
  g.add_place({"Alpha", {-0.02, 0}, "1"});
  EXPECT_EQ(nearest_place(g, {0, 0.3}, 100).value_or(""), "Origin");
  Gazetteer pair;
  pair.add_region({"US", "A", "", "1"}, {square(-1, -1, 2)});
  pair.add_place({"Beta", {0.02, 0}, "1"});
  pair.add_place({"Alpha", {-0.02, 0}, "1"});
  EXPECT_EQ(nearest_place(pair, {0, 0.3}, 100).value_or(""), "Alpha");
}

TEST(PointInPolygon, AgreesWithWindingNumber) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    // Star-shaped, hence simple, polygon with random radii.
    const int n = 3 + static_cast<int>(rng.below(12));
    const double cx = rng.uniform(-10, 10), cy = rng.uniform(-10, 10);
    Ring ring;
    for (int i = 0; i < n; ++i) {
      const double a = 2 * std::numbers::pi * (i + rng.uniform(0.1, 0.9)) / n;
      const double r = rng.uniform(0.2, 2.0);
      ring.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    ring.push_back(ring.front());
    for (int q = 0; q < 30; ++q) {
      const PlanarPoint p{cx + rng.uniform(-2.2, 2.2), cy + rng.uniform(-2.2, 2.2)};
      EXPECT_EQ(ring_contains(ring, p), winding_number(ring, p) != 0);
    }
  }
}

TEST(PointInPolygon, InteriorConsistency) {
  const Gazetteer g = parse(region_line("1", "US", "A", "B", 0, 0, 1) + region_line("2", "US", "A", "C", 1, 0, 1));
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const GeoPoint p{rng.uniform(0.001, 0.999), rng.uniform(0.001, 1.999)};
    const auto k = reverse_geocode(g, p);
    ASSERT_TRUE(k);
    EXPECT_EQ(k->region_id, p.lon < 1 ? "1" : "2");
  }
}

}  // namespace
}  // namespace mobility
