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

#include "mobility/mobility.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_util.hpp"

namespace {

using mobility::testing::TempDir;

std::string take(char* s) {
  std::string out = s ? s : "";
  mob_string_free(s);
  return out;
}

TEST(CApi, ConfigRoundTrip) {
  mob_config* cfg = nullptr;
  ASSERT_EQ(mob_config_create(&cfg), MOB_OK);
  EXPECT_EQ(mob_config_set(cfg, "min-reports", "12"), MOB_OK);
  char* text = nullptr;
  ASSERT_EQ(mob_config_dump(cfg, &text), MOB_OK);
  const auto j = nlohmann::json::parse(take(text));
  EXPECT_EQ(j.at("min-reports"), 12);
  EXPECT_EQ(j.at("accuracy-max-m"), 50.0);
  mob_config_destroy(cfg);
}

TEST(CApi, ErrorsCarryStatusAndMessage) {
  mob_config* cfg = nullptr;
  ASSERT_EQ(mob_config_create(&cfg), MOB_OK);
  EXPECT_EQ(mob_config_set(cfg, "bogus", "1"), MOB_ERR_CONFIG);
  EXPECT_NE(std::string(mob_last_error()).find("bogus"), std::string::npos);
  EXPECT_EQ(mob_config_set(cfg, nullptr, "1"), MOB_ERR_CONFIG);
  EXPECT_EQ(mob_config_load_file(cfg, "/nonexistent/config.json"), MOB_ERR_IO);
  EXPECT_EQ(mob_run(cfg, nullptr), MOB_ERR_CONFIG);
  EXPECT_STREQ(mob_status_name(MOB_ERR_DATA), "data");
  EXPECT_EQ(mob_config_set(cfg, "workers", "2"), MOB_OK);
  EXPECT_STREQ(mob_last_error(), "");
  mob_config_destroy(cfg);
  mob_config_destroy(nullptr);
}

TEST(CApi, GeometryHelpers) {
  EXPECT_NEAR(mob_haversine_km(0, 0, 1, 0), 111.195, 0.001);
  EXPECT_EQ(mob_solar_tz_offset_hours(-106.0), -7);
}

TEST(CApi, SynthRunAndCompare) {
  TempDir dir;
  mob_scenario* sc = nullptr;
  ASSERT_EQ(mob_scenario_create(&sc), MOB_OK);
  ASSERT_EQ(mob_scenario_set(sc, "devices", "30"), MOB_OK);
  ASSERT_EQ(mob_scenario_set(sc, "end", "2020-03-20"), MOB_OK);
  EXPECT_EQ(mob_scenario_set(sc, "devices", "many"), MOB_ERR_CONFIG);
  char* summary = nullptr;
  const std::string in = (dir / "in").string();
  ASSERT_EQ(mob_scenario_generate(sc, in.c_str(), &summary), MOB_OK) << mob_last_error();
  const auto gen = nlohmann::json::parse(take(summary));
  mob_scenario_destroy(sc);

  mob_gazetteer* gz = nullptr;
  const std::string gz_path = gen.at("gazetteer").get<std::string>();
  ASSERT_EQ(mob_gazetteer_load(gz_path.c_str(), &gz), MOB_OK);
  EXPECT_GT(mob_gazetteer_region_count(gz), 0u);
  mob_region region;
  int found = -1;
  ASSERT_EQ(mob_gazetteer_locate(gz, 40.5, -74.5, &region, &found), MOB_OK);
  EXPECT_EQ(found, 1);
  EXPECT_EQ(region.admin_level, 2);
  EXPECT_STREQ(region.country_code, "US");
  ASSERT_EQ(mob_gazetteer_locate(gz, -40, 10, &region, &found), MOB_OK);
  EXPECT_EQ(found, 0);
  EXPECT_EQ(mob_gazetteer_locate(gz, 91, 10, &region, &found), MOB_ERR_CONFIG);
  mob_gazetteer_destroy(gz);

  mob_config* cfg = nullptr;
  ASSERT_EQ(mob_config_create(&cfg), MOB_OK);
  const std::string a = "a=" + in + "/shard-*", b = "b=" + in + "/shard-*";
  const std::string out = (dir / "out").string();
  ASSERT_EQ(mob_config_set(cfg, "input", a.c_str()), MOB_OK);
  ASSERT_EQ(mob_config_set(cfg, "input", b.c_str()), MOB_OK);
  ASSERT_EQ(mob_config_set(cfg, "gazetteer", gz_path.c_str()), MOB_OK);
  ASSERT_EQ(mob_config_set(cfg, "output-dir", out.c_str()), MOB_OK);
  char* report = nullptr;
  ASSERT_EQ(mob_run(cfg, &report), MOB_OK) << mob_last_error();
  const std::string lines = take(report);
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 2);
  mob_config_destroy(cfg);

  const std::string pa = out + "/a/mobility.ndjson", pb = out + "/b/mobility.csv";
  const std::string pc = out + "/ab.ndjson";
  ASSERT_EQ(mob_compare(pa.c_str(), pb.c_str(), pc.c_str(), &summary), MOB_OK) << mob_last_error();
  const auto s = nlohmann::json::parse(take(summary));
  EXPECT_EQ(s.at("rows"), s.at("both"));
  EXPECT_EQ(mob_compare(pa.c_str(), "/nonexistent.ndjson", pc.c_str(), nullptr), MOB_ERR_IO);
}

}  // namespace
