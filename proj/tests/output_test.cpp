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

#include "mobility/output.hpp"

#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "mobility/error.hpp"
#include "mobility/synth.hpp"
#include "test_util.hpp"

namespace mobility {
namespace {

const std::filesystem::path kGolden = MOBILITY_GOLDEN_DIR;

OutputRecord record(std::string a1, std::string a2, std::string id, std::string date,
                    std::uint64_t samples, double m50, std::optional<double> index) {
  OutputRecord r;
  r.country_code = "US";
  r.admin_level = a2.empty() ? "admin1" : "admin2";
  r.admin1 = std::move(a1);
  r.admin2 = std::move(a2);
  r.region_id = std::move(id);
  r.date = std::move(date);
  r.samples = samples;
  r.m50 = m50;
  r.m50_index = index;
  return r;
}

std::vector<OutputRecord> basic_records() {
  std::vector<OutputRecord> v = {
      record("Washington, \"D.C.\"", "", "11", "2020-03-16", 12, 1.5, std::nullopt),
      record("New York", "Kings", "36047", "2020-03-02", 40, 0.031, 0.6),
      record("New York", "", "36", "2020-03-02", 120, 5.2, 100.0),
  };
  sort_records(v);
  return v;
}

std::vector<OutputRecord> random_records(std::uint64_t seed, bool verbose) {
  Rng rng(seed);
  std::vector<OutputRecord> out;
  const char* names[] = {"Plain", "With, comma", "Quote \"q\"", "Line\nbreak", "Ünïcode", ""};
  for (int i = 0; i < 300; ++i) {
    OutputRecord r = record(names[rng.below(5)], rng.bernoulli(0.5) ? names[rng.below(6)] : "",
                            std::to_string(rng.below(100000)),
                            (LocalDate::from_ymd(2020, 2, 1) + static_cast<int>(rng.below(90))).iso(),
                            rng.below(5000), round_km(rng.uniform(0, 50)),
                            rng.bernoulli(0.8) ? std::optional(round_index(rng.uniform(0, 300)))
                                               : std::nullopt);
    if (verbose) {
      DetailColumns d;
      for (Summary* s : {&d.m_max, &d.m_bb, &d.m_ch}) {
        *s = {round_km(rng.uniform(0, 9)), round_km(rng.uniform(0, 9)), round_km(rng.uniform(0, 9)),
              round_km(rng.uniform(0, 9))};
      }
      if (r.m50_index) d.pct_change = round_index(*r.m50_index - 100);
      r.detail = d;
    }
    out.push_back(std::move(r));
  }
  sort_records(out);
  return out;
}

TEST(Ndjson, GoldenFile) {
  std::ostringstream os;
  write_ndjson(basic_records(), os);
  EXPECT_EQ(os.str(), testing::read_file(kGolden / "basic.ndjson"));
}

TEST(Csv, GoldenFile) {
  std::ostringstream os;
  write_csv(basic_records(), os, false);
  EXPECT_EQ(os.str(), testing::read_file(kGolden / "basic.csv"));
}

TEST(Ndjson, OneLinePerRecordAndNullIndex) {
  std::ostringstream one;
  const std::vector<OutputRecord> single = {basic_records().back()};
  write_ndjson(single, one);
  const std::string text = one.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find("\"m50_index\":null"), std::string::npos);
  EXPECT_TRUE(nlohmann::json::accept(text));
  std::ostringstream none;
  write_ndjson({}, none);
  EXPECT_EQ(none.str(), "");
}

TEST(Ndjson, LinesParseIndependentlyAndRoundTrip) {
  for (bool verbose : {false, true}) {
    const auto records = random_records(verbose ? 2 : 1, verbose);
    std::ostringstream os;
    write_ndjson(records, os);
    std::istringstream lines(os.str());
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
      const auto j = nlohmann::json::parse(line);
      EXPECT_TRUE(j.is_object());
      EXPECT_EQ(parse_ndjson_record(line), records[i++]);
    }
    EXPECT_EQ(i, records.size());
  }
}

TEST(Csv, RoundTripsThroughRfc4180Reader) {
  for (bool verbose : {false, true}) {
    const auto records = random_records(verbose ? 4 : 3, verbose);
    std::ostringstream os;
    write_csv(records, os, verbose);
    std::istringstream in(os.str());
    EXPECT_EQ(read_csv(in), records);
  }
}

TEST(Csv, HeaderAndQuoting) {
  const auto h = csv_header(false);
  std::string joined;
  for (const auto& c : h) joined += (joined.empty() ? "" : ",") + c;
  EXPECT_EQ(joined, "country_code,admin_level,admin1,admin2,region_id,date,samples,m50,m50_index");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(Csv, CrlfInput) {
  std::istringstream in("a,b\r\n\"x\r\ny\",2\r\n");
  const auto rows = read_csv_rows(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x\r\ny");
  EXPECT_EQ(rows[1][1], "2");
}

TEST(Formats, SameValuesFieldByField) {
  const auto records = random_records(5, true);
  std::ostringstream nd, csv;
  write_ndjson(records, nd);
  write_csv(records, csv, true);
  std::istringstream a(nd.str()), b(csv.str());
  EXPECT_EQ(read_ndjson(a), read_csv(b));
}

TEST(Formats, RoundingIsStable) {
  EXPECT_EQ(round_km(0.0305), round_km(round_km(0.0305)));
  EXPECT_EQ(round_index(-0.04), 0.0);
  EXPECT_FALSE(std::signbit(round_index(-0.04)));
}

TEST(ToOutputRecord, LevelsAndRounding) {
  RegionDayStats s;
  s.region = {"US", "NY", "Kings", "36047"};
  s.date = LocalDate::from_ymd(2020, 3, 23);
  s.samples = 9;
  s.m50 = 0.03149;
  s.m_max.median = s.m50;
  s.m50_index = 0.60567;
  s.pct_change = 0.60567 - 100;
  const OutputRecord r = to_output_record(s, true);
  EXPECT_EQ(r.admin_level, "admin2");
  EXPECT_EQ(r.date, "2020-03-23");
  EXPECT_EQ(r.m50, 0.031);
  EXPECT_EQ(*r.m50_index, 0.6);
  EXPECT_EQ(*r.detail->pct_change, -99.4);
  EXPECT_FALSE(to_output_record(s, false).detail);
}

TEST(WriteFileAtomic, NoTempLeftOnFailure) {
  testing::TempDir dir;
  const auto target = dir / "out.ndjson";
  write_file_atomic(target, [](std::ostream& os) { os << "old\n"; });
  EXPECT_THROW(write_file_atomic(target,
                                 [](std::ostream& os) {
                                   os << "partial";
                                   throw data_error("boom");
                                 }),
               Error);
  EXPECT_EQ(testing::read_file(target), "old\n");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.ndjson.tmp"));
  EXPECT_THROW(write_file_atomic(dir / "missing" / "x", [](std::ostream&) {}), Error);
}

}  // namespace
}  // namespace mobility
