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

#include "mobility/ingest.hpp"

#include <zlib.h>

#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "mobility/error.hpp"
#include "test_util.hpp"

namespace mobility {
namespace {

using testing::TempDir;
using testing::write_file;

const PositionReport* as_report(const ParsedLine& p) { return std::get_if<PositionReport>(&p); }

std::vector<PositionReport> collect(const std::filesystem::path& p, IngestStats* stats,
                                    double threshold = kDefaultAccuracyMaxM) {
  std::vector<PositionReport> out;
  *stats = read_shard(p, {threshold}, [&](PositionReport&& r) { out.push_back(std::move(r)); });
  return out;
}

void write_gz(const std::filesystem::path& p, const std::string& text) {
  gzFile f = gzopen(p.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
}

TEST(ParseReportLine, GoodLine) {
  const auto parsed = parse_report_line("abc,1584316800,40.7,-74.0,12.5");
  const PositionReport* r = as_report(parsed);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->device_id, "abc");
  EXPECT_EQ(r->epoch_s, 1584316800);
  EXPECT_EQ(r->point.lat, 40.7);
  EXPECT_EQ(r->point.lon, -74.0);
  EXPECT_EQ(r->accuracy_m, 12.5);
}

TEST(ParseReportLine, Malformed) {
  for (const char* line : {"abc,1584316800,95.0,-74.0,12.5", "abc,notanumber,40.7,-74.0,12.5",
                           "abc,1584316800,40.7,-181,12.5", "abc,1584316800,40.7,-74.0",
                           "abc,1584316800,40.7,-74.0,12.5,9", ",1584316800,40.7,-74.0,12.5",
                           "abc,1584316800,40.7,-74.0,-1", "abc,1584316800,nan,-74.0,3",
                           "abc,1584316800.5,40.7,-74.0,3", "abc,1584316800,40.7x,-74.0,3", ""}) {
    EXPECT_TRUE(std::holds_alternative<Malformed>(parse_report_line(line))) << line;
  }
}

TEST(AccuracyFilter, BoundaryInclusive) {
  PositionReport r;
  r.accuracy_m = 12.5;
  EXPECT_TRUE(accuracy_filter(r, 50));
  r.accuracy_m = 50.0;
  EXPECT_TRUE(accuracy_filter(r, 50));
  r.accuracy_m = 50.1;
  EXPECT_FALSE(accuracy_filter(r, 50));
}

TEST(ReadShard, CountsMalformed) {
  TempDir dir;
  write_file(dir / "a.csv",
             "d1,1584316800,40.7,-74.0,12.5\n"
             "d1,1584316900,40.7,-74.0,12.5\n"
             "garbage line\n"
             "d2,1584317000,1.3,103.8,5\n");
  IngestStats stats;
  const auto reports = collect(dir / "a.csv", &stats);
  EXPECT_EQ(reports.size(), 3u);
  EXPECT_EQ(stats.lines_malformed, 1u);
  EXPECT_EQ(stats.lines_read, 4u);
  EXPECT_TRUE(stats.reconciles());
}

TEST(ReadShard, EmptyFile) {
  TempDir dir;
  write_file(dir / "empty.csv", "");
  IngestStats stats;
  EXPECT_TRUE(collect(dir / "empty.csv", &stats).empty());
  EXPECT_EQ(stats, IngestStats{});
}

TEST(ReadShard, HeaderSkippedAndCrlfAccepted) {
  TempDir dir;
  write_file(dir / "h.csv",
             "device_id,epoch_s,lat,lon,accuracy_m\r\n"
             "d1,1584316800,40.7,-74.0,60\r\n"
             "d1,1584316801,40.7,-74.0,50\r\n");
  IngestStats stats;
  const auto reports = collect(dir / "h.csv", &stats);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].accuracy_m, 50.0);
  EXPECT_EQ(stats.lines_read, 2u);
  EXPECT_EQ(stats.reports_rejected_accuracy, 1u);
}

TEST(ReadShard, GzipMatchesPlain) {
  TempDir dir;
  std::string text;
  for (int i = 0; i < 5000; ++i) {
    text += "dev" + std::to_string(i % 7) + "," + std::to_string(1584316800 + i) +
            ",40.7,-74.0," + std::to_string(i % 80) + "\n";
  }
  write_file(dir / "p.csv", text);
  write_gz(dir / "p.csv.gz", text);
  IngestStats plain, gz;
  EXPECT_EQ(collect(dir / "p.csv", &plain), collect(dir / "p.csv.gz", &gz));
  EXPECT_EQ(plain, gz);
  EXPECT_GT(gz.reports_rejected_accuracy, 0u);
}

TEST(ReadShard, Errors) {
  TempDir dir;
  IngestStats stats;
  try {
    collect(dir / "missing.csv", &stats);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
    EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
  }
  write_file(dir / "fake.csv.gz", "d1,1584316800,40.7,-74.0,12.5\n");
  EXPECT_THROW(collect(dir / "fake.csv.gz", &stats), Error);

  std::string text;
  for (int i = 0; i < 20000; ++i) text += "d1,1584316800,40.7,-74.0,12.5\n";
  write_gz(dir / "t.csv.gz", text);
  const std::string full = testing::read_file(dir / "t.csv.gz");
  write_file(dir / "trunc.csv.gz", full.substr(0, full.size() / 2));
  EXPECT_THROW(collect(dir / "trunc.csv.gz", &stats), Error);
}

}  // namespace
}  // namespace mobility
