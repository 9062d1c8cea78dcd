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

#include "mobility/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>

#include <gtest/gtest.h>
#include <json.hpp>

#include "mobility/compare.hpp"
#include "mobility/error.hpp"
#include "mobility/output.hpp"
#include "mobility/synth.hpp"
#include "test_util.hpp"

namespace mobility {
namespace {

using testing::TempDir;
using testing::read_file;
namespace fs = std::filesystem;

struct Fixture {
  TempDir dir;
  GeneratedScenario scenario;
  PipelineConfig config;

  explicit Fixture(ScenarioSpec spec = {}) {
    scenario = generate(spec, dir / "in");
    config.set("input", "synth=" + (dir / "in" / "shard-*").string());
    config.gazetteer = scenario.gazetteer;
    config.output_dir = dir / "out";
    config.workers = 2;
    config.n_buckets = 8;
  }
};

ScenarioSpec small() {
  ScenarioSpec s;
  s.devices = 60;
  s.end = LocalDate::from_ymd(2020, 3, 24);
  s.malformed_fraction = 0.002;
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

TEST(Pipeline, OutputsMatchTruthSidecar) {
  Fixture f(small());
  const RunResult result = run_pipeline(f.config);
  ASSERT_EQ(result.datasets.size(), 1u);
  EXPECT_TRUE(result.datasets[0].reconciles());

  // Expected table straight from the oracle's sidecar: counties are the
  // home region, states are the county id without its last three digits.
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  std::ifstream truth(f.scenario.truth);
  std::string line;
  while (std::getline(truth, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.at("verdict") != "eligible") continue;
    const std::string county = j.at("home_region_id").get<std::string>();
    if (county.empty()) continue;
    const std::string date = j.at("local_date").get<std::string>();
    groups[{county, date}].push_back(j.at("m_max").get<double>());
    groups[{county.substr(0, county.size() - 3), date}].push_back(j.at("m_max").get<double>());
  }
  std::map<std::string, std::vector<double>> weekday_m50;
  for (const auto& [key, values] : groups) {
    const LocalDate d = *LocalDate::parse(key.second);
    if (d.is_weekday() && d <= LocalDate::from_ymd(2020, 3, 7)) {
      weekday_m50[key.first].push_back(median(values));
    }
  }

  std::ifstream out(f.config.output_dir / "synth" / "mobility.ndjson");
  const auto records = read_ndjson(out);
  ASSERT_EQ(records.size(), groups.size());
  for (const OutputRecord& r : records) {
    const auto it = groups.find({r.region_id, r.date});
    ASSERT_NE(it, groups.end()) << r.region_id << " " << r.date;
    EXPECT_EQ(r.samples, it->second.size());
    const double m50 = median(it->second);
    EXPECT_EQ(r.m50, round_km(m50));
    ASSERT_TRUE(r.m50_index);
    const double index = 100 * m50 / median(weekday_m50.at(r.region_id));
    EXPECT_NEAR(*r.m50_index, index, 0.05 + 1e-9);
  }
}

TEST(Pipeline, ReportCountsMatchGenerator) {
  Fixture f(small());
  const DatasetReport r = run_pipeline(f.config).datasets.at(0);
  EXPECT_EQ(r.ingest.lines_read, f.scenario.data_lines);
  EXPECT_EQ(r.ingest.lines_malformed, f.scenario.malformed_lines);
  EXPECT_EQ(r.ingest.reports_accepted, f.scenario.accepted);
  EXPECT_EQ(r.ingest.reports_rejected_accuracy, f.scenario.rejected_accuracy);
  EXPECT_EQ(r.device_days, f.scenario.truth_device_days);
  EXPECT_GT(r.unmatched_geocode + r.too_few_reports + r.short_span, 0u);
  EXPECT_EQ(DatasetReport::from_json_line(r.to_json_line()).to_json_line(), r.to_json_line());
  const std::string report = read_file(f.config.output_dir / "run_report.ndjson");
  EXPECT_EQ(report, r.to_json_line() + "\n");
}

TEST(Pipeline, WorkerAndBucketCountsDoNotChangeBytes) {
  Fixture f(small());
  f.config.emit_device_days = true;
  std::string reference;
  for (auto [workers, buckets] : {std::pair{1, 1}, {3, 5}, {4, 32}}) {
    f.config.workers = workers;
    f.config.n_buckets = buckets;
    run_pipeline(f.config);
    const fs::path d = f.config.output_dir / "synth";
    const std::string all = read_file(d / "mobility.ndjson") + read_file(d / "mobility.csv") +
                            read_file(d / "device_days.ndjson") +
                            read_file(f.config.output_dir / "run_report.ndjson");
    if (reference.empty()) {
      reference = all;
    } else {
      EXPECT_EQ(all, reference) << workers << " workers, " << buckets << " buckets";
    }
  }
}

TEST(Pipeline, ScratchRemovedOnSuccessKeptOnFailure) {
  Fixture f(small());
  run_pipeline(f.config);
  EXPECT_FALSE(fs::exists(f.config.output_dir / ".scratch"));

  f.config.baseline_start = LocalDate::from_ymd(2021, 1, 1);
  f.config.baseline_end = LocalDate::from_ymd(2021, 1, 31);
  try {
    run_pipeline(f.config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
  EXPECT_FALSE(fs::is_empty(f.config.output_dir / ".scratch" / "m50-synth"));
}

TEST(Pipeline, MissingGazetteerNamesPath) {
  Fixture f(small());
  f.config.gazetteer = f.dir / "absent-gazetteer.ndjson";
  try {
    run_pipeline(f.config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
    EXPECT_NE(std::string(e.what()).find("absent-gazetteer.ndjson"), std::string::npos);
  }
}

TEST(Pipeline, NoMatchingInputsIsIoError) {
  Fixture f(small());
  f.config.inputs.clear();
  f.config.set("input", (f.dir / "nothing-*.csv").string());
  try {
    run_pipeline(f.config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(Pipeline, DateRangeFilter) {
  Fixture f(small());
  f.config.date_from = LocalDate::from_ymd(2020, 2, 20);
  f.config.date_to = LocalDate::from_ymd(2020, 3, 10);
  const DatasetReport r = run_pipeline(f.config).datasets.at(0);
  EXPECT_GT(r.out_of_range, 0u);
  EXPECT_TRUE(r.reconciles());
  std::ifstream out(f.config.output_dir / "synth" / "mobility.ndjson");
  for (const OutputRecord& rec : read_ndjson(out)) {
    EXPECT_GE(rec.date, "2020-02-20");
    EXPECT_LE(rec.date, "2020-03-10");
  }
}

TEST(Pipeline, FormatsAndVerbose) {
  Fixture f(small());
  f.config.format = OutputFormat::csv;
  f.config.verbose = true;
  run_pipeline(f.config);
  const fs::path d = f.config.output_dir / "synth";
  EXPECT_FALSE(fs::exists(d / "mobility.ndjson"));
  std::ifstream in(d / "mobility.csv");
  const auto records = read_csv(in);
  ASSERT_FALSE(records.empty());
  for (const auto& r : records) {
    ASSERT_TRUE(r.detail);
    EXPECT_EQ(r.detail->m_max.median, r.m50);
  }
}

TEST(Pipeline, TwoDatasetsGetComparison) {
  Fixture f(small());
  f.config.set("input", "copy=" + (f.dir / "in" / "shard-00[0-3].csv").string());
  const RunResult result = run_pipeline(f.config);
  ASSERT_EQ(result.datasets.size(), 2u);
  EXPECT_EQ(read_file(f.config.output_dir / "synth" / "mobility.ndjson"),
            read_file(f.config.output_dir / "copy" / "mobility.ndjson"));
  std::ifstream cmp(f.config.output_dir / "comparison-synth-copy.ndjson");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(cmp, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("status"), "both");
    EXPECT_EQ(j.at("delta").get<double>(), 0.0);
    ++rows;
  }
  EXPECT_GT(rows, 0u);
}

TEST(Pipeline, GzipShardsGiveSameResult) {
  ScenarioSpec plain = small();
  ScenarioSpec gz = small();
  gz.gzip = true;
  Fixture a(plain), b(gz);
  b.config.inputs.clear();
  b.config.set("input", "synth=" + (b.dir / "in" / "*.gz").string());
  run_pipeline(a.config);
  run_pipeline(b.config);
  EXPECT_EQ(read_file(a.config.output_dir / "synth" / "mobility.ndjson"),
            read_file(b.config.output_dir / "synth" / "mobility.ndjson"));
}

}  // namespace
}  // namespace mobility
