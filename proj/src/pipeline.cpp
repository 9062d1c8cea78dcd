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

#include <glob.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <utility>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "mobility/collate.hpp"
#include "mobility/compare.hpp"
#include "mobility/error.hpp"
#include "mobility/metrics.hpp"
#include "mobility/output.hpp"
#include "parallel.hpp"

namespace mobility {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct BucketOutcome {
  std::uint64_t device_days = 0;
  std::uint64_t device_day_reports = 0;
  std::uint64_t out_of_range = 0;
  std::uint64_t too_few_reports = 0;
  std::uint64_t short_span = 0;
  std::uint64_t eligible = 0;
  std::uint64_t unmatched = 0;
  RegionDayReducer reducer;
  std::vector<std::pair<std::pair<std::string, LocalDate>, std::string>> dumps;
};

std::string device_day_line(const DeviceDay& dd, const char* verdict,
                            const std::optional<MobilityMetrics>& m,
                            const Region* region) {
  ordered_json j;
  j["device_id"] = dd.device_id;
  j["local_date"] = dd.local_date.iso();
  j["tz_offset_hours"] = dd.tz_offset_hours;
  j["report_count"] = dd.reports.size();
  j["verdict"] = verdict;
  j["region_id"] = region ? ordered_json(region->key.region_id) : ordered_json(nullptr);
  if (m) {
    j["m_max"] = m->m_max;
    j["m_bb"] = m->m_bb;
    j["m_ch"] = m->m_ch;
    j["a_bb"] = m->a_bb.value();
    j["a_ch"] = m->a_ch.value();
    j["span_hours"] = m->span_hours;
    j["canonical_lat"] = m->canonical_point.lat;
    j["canonical_lon"] = m->canonical_point.lon;
  }
  return j.dump();
}

bool in_range(const PipelineConfig& c, LocalDate d) {
  return (!c.date_from || !(d < *c.date_from)) && (!c.date_to || !(*c.date_to < d));
}

void process_bucket(const PipelineConfig& config, const Gazetteer& gazetteer,
                    const fs::path& scratch, std::size_t bucket, BucketOutcome& out) {
  const MetricsConfig mc = config.metrics();
  for (const DeviceDay& dd : build_device_days(read_bucket(scratch, bucket))) {
    ++out.device_days;
    out.device_day_reports += dd.reports.size();
    const auto dump = [&](const char* verdict, const std::optional<MobilityMetrics>& m,
                          const Region* region) {
      if (config.emit_device_days) {
        out.dumps.push_back({{dd.device_id, dd.local_date},
                             device_day_line(dd, verdict, m, region)});
      }
    };
    if (!in_range(config, dd.local_date)) {
      ++out.out_of_range;
      dump("out_of_range", std::nullopt, nullptr);
      continue;
    }
    DeviceDayEvaluation ev = evaluate(dd, mc);
    if (ev.verdict == Eligibility::too_few_reports) {
      ++out.too_few_reports;
    } else if (ev.verdict == Eligibility::short_span) {
      ++out.short_span;
    }
    if (!ev.metrics) {
      dump(to_string(ev.verdict), std::nullopt, nullptr);
      continue;
    }
    ++out.eligible;
    const MobilityMetrics& m = *ev.metrics;
    const Region* region = gazetteer.locate(m.canonical_point);
    if (region == nullptr || admin_level(region->key) == AdminLevel::country) {
      ++out.unmatched;
      dump("unmatched", ev.metrics, nullptr);
      continue;
    }
    out.reducer.add(region->key, dd.local_date, m);
    if (admin_level(region->key) == AdminLevel::admin2) {
      out.reducer.add(gazetteer.admin1_rollup(region->key), dd.local_date, m);
    }
    dump("eligible", ev.metrics, region);
  }
}

void write_records(const fs::path& path, std::span<const OutputRecord> records,
                   OutputFormat kind, bool verbose) {
  write_file_atomic(path, [&](std::ostream& os) {
    if (kind == OutputFormat::csv) {
      write_csv(records, os, verbose);
    } else {
      write_ndjson(records, os);
    }
  });
}

fs::path primary_output(const fs::path& dir, OutputFormat f) {
  return dir / (f == OutputFormat::csv ? "mobility.csv" : "mobility.ndjson");
}

}  // namespace

bool DatasetReport::reconciles() const noexcept {
  return ingest.reconciles() && ingest.reports_accepted == device_day_reports &&
         device_days == out_of_range + too_few_reports + short_span + eligible &&
         eligible == admin1_samples + unmatched_geocode;
}

std::string DatasetReport::to_json_line() const {
  ordered_json j;
  j["dataset"] = dataset;
  j["shards"] = shards;
  j["lines_read"] = ingest.lines_read;
  j["lines_malformed"] = ingest.lines_malformed;
  j["reports_rejected_accuracy"] = ingest.reports_rejected_accuracy;
  j["reports_accepted"] = ingest.reports_accepted;
  j["device_days"] = device_days;
  j["device_day_reports"] = device_day_reports;
  j["out_of_range"] = out_of_range;
  j["rejected_too_few_reports"] = too_few_reports;
  j["rejected_short_span"] = short_span;
  j["eligible"] = eligible;
  j["unmatched_geocode"] = unmatched_geocode;
  j["admin1_samples"] = admin1_samples;
  j["admin2_samples"] = admin2_samples;
  j["rows_admin1"] = rows_admin1;
  j["rows_admin2"] = rows_admin2;
  j["rows_with_index"] = rows_with_index;
  j["regions"] = regions;
  j["regions_with_baseline"] = regions_with_baseline;
  j["reconciled"] = reconciles();
  return j.dump();
}

DatasetReport DatasetReport::from_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    DatasetReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.shards = j.at("shards").get<std::uint64_t>();
    r.ingest.lines_read = j.at("lines_read").get<std::uint64_t>();
    r.ingest.lines_malformed = j.at("lines_malformed").get<std::uint64_t>();
    r.ingest.reports_rejected_accuracy = j.at("reports_rejected_accuracy").get<std::uint64_t>();
    r.ingest.reports_accepted = j.at("reports_accepted").get<std::uint64_t>();
    r.device_days = j.at("device_days").get<std::uint64_t>();
    r.device_day_reports = j.at("device_day_reports").get<std::uint64_t>();
    r.out_of_range = j.at("out_of_range").get<std::uint64_t>();
    r.too_few_reports = j.at("rejected_too_few_reports").get<std::uint64_t>();
    r.short_span = j.at("rejected_short_span").get<std::uint64_t>();
    r.eligible = j.at("eligible").get<std::uint64_t>();
    r.unmatched_geocode = j.at("unmatched_geocode").get<std::uint64_t>();
    r.admin1_samples = j.at("admin1_samples").get<std::uint64_t>();
    r.admin2_samples = j.at("admin2_samples").get<std::uint64_t>();
    r.rows_admin1 = j.at("rows_admin1").get<std::uint64_t>();
    r.rows_admin2 = j.at("rows_admin2").get<std::uint64_t>();
    r.rows_with_index = j.at("rows_with_index").get<std::uint64_t>();
    r.regions = j.at("regions").get<std::uint64_t>();
    r.regions_with_baseline = j.at("regions_with_baseline").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw data_error(std::string("invalid run report line: ") + e.what());
  }
}

std::vector<fs::path> expand_inputs(const DatasetInput& input) {
  std::vector<fs::path> out;
  for (const std::string& pattern : input.globs) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), GLOB_ERR | GLOB_NOSORT, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) {
        fs::path p = g.gl_pathv[i];
        if (fs::is_regular_file(p)) out.push_back(std::move(p));
      }
    }
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) {
      throw io_error("cannot expand input pattern '" + pattern + "'");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) {
    std::string all;
    for (const std::string& p : input.globs) all += (all.empty() ? "" : ", ") + p;
    throw io_error("dataset '" + input.name + "': no input files match " + all);
  }
  return out;
}

DatasetReport run_dataset(const PipelineConfig& config, const DatasetInput& input,
                          const Gazetteer& gazetteer, const fs::path& out_dir,
                          std::vector<fs::path>* written) {
  const std::vector<fs::path> shards = expand_inputs(input);
  DatasetReport report;
  report.dataset = input.name;
  report.shards = shards.size();

  const fs::path scratch = config.scratch_root() / ("m50-" + input.name);
  std::error_code ec;
  fs::remove_all(scratch, ec);
  fs::create_directories(scratch, ec);
  if (ec) throw io_error("cannot create scratch directory '" + scratch.string() + "'");
  fs::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + out_dir.string() + "'");

  // Scatter: shards -> per-worker spill files keyed by device hash.
  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  {
    std::vector<std::unique_ptr<BucketWriter>> writers;
    std::vector<IngestStats> stats(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      writers.push_back(std::make_unique<BucketWriter>(scratch, w, config.n_buckets));
    }
    const IngestConfig ic = config.ingest();
    detail::parallel_for(shards.size(), workers, [&](std::size_t task, std::size_t w) {
      spdlog::debug("dataset {}: reading {}", input.name, shards[task].string());
      stats[w] += read_shard(shards[task], ic,
                             [&](PositionReport&& r) { writers[w]->write(r); });
    });
    for (auto& w : writers) w->commit();
    for (const IngestStats& s : stats) report.ingest += s;
  }

  // Gather: one bucket at a time holds every report of its devices.
  std::vector<BucketOutcome> outcomes(config.n_buckets);
  detail::parallel_for(config.n_buckets, workers, [&](std::size_t b, std::size_t) {
    process_bucket(config, gazetteer, scratch, b, outcomes[b]);
  });
  RegionDayReducer reducer;
  std::vector<std::pair<std::pair<std::string, LocalDate>, std::string>> dumps;
  for (BucketOutcome& o : outcomes) {
    report.device_days += o.device_days;
    report.device_day_reports += o.device_day_reports;
    report.out_of_range += o.out_of_range;
    report.too_few_reports += o.too_few_reports;
    report.short_span += o.short_span;
    report.eligible += o.eligible;
    report.unmatched_geocode += o.unmatched;
    reducer.merge(std::move(o.reducer));
    std::move(o.dumps.begin(), o.dumps.end(), std::back_inserter(dumps));
  }
  outcomes.clear();

  std::vector<RegionDayStats> stats = reducer.finish();
  const BaselineTable baseline = compute_baseline(stats, config.baseline());
  apply_index(stats, baseline);

  std::vector<OutputRecord> records;
  records.reserve(stats.size());
  RegionKey last;
  for (const RegionDayStats& s : stats) {
    if (admin_level(s.region) == AdminLevel::admin2) {
      ++report.rows_admin2;
      report.admin2_samples += s.samples;
    } else {
      ++report.rows_admin1;
      report.admin1_samples += s.samples;
    }
    if (s.m50_index) ++report.rows_with_index;
    if (records.empty() || !(s.region == last)) {
      ++report.regions;
      last = s.region;
    }
    records.push_back(to_output_record(s, config.verbose));
  }
  report.regions_with_baseline = baseline.norms().size();
  sort_records(records);

  const auto note = [&](const fs::path& p) {
    if (written) written->push_back(p);
  };
  if (config.format != OutputFormat::csv) {
    write_records(out_dir / "mobility.ndjson", records, OutputFormat::ndjson, config.verbose);
    note(out_dir / "mobility.ndjson");
  }
  if (config.format != OutputFormat::ndjson) {
    write_records(out_dir / "mobility.csv", records, OutputFormat::csv, config.verbose);
    note(out_dir / "mobility.csv");
  }
  if (config.emit_device_days) {
    std::sort(dumps.begin(), dumps.end());
    write_file_atomic(out_dir / "device_days.ndjson", [&](std::ostream& os) {
      for (const auto& d : dumps) os << d.second << '\n';
    });
    note(out_dir / "device_days.ndjson");
  }

  fs::remove_all(scratch, ec);
  if (config.scratch_dir.empty() && fs::is_empty(config.scratch_root(), ec)) {
    fs::remove(config.scratch_root(), ec);
  }

  if (!report.reconciles()) {
    throw data_error("dataset '" + input.name + "': run report does not reconcile: " +
                     report.to_json_line());
  }
  spdlog::info("dataset {}: {} reports, {} device-days, {} eligible, {} rows", input.name,
               report.ingest.reports_accepted, report.device_days, report.eligible,
               records.size());
  return report;
}

RunResult run_pipeline(const PipelineConfig& config) {
  config.validate(true);
  const Gazetteer gazetteer = Gazetteer::load(config.gazetteer);
  RunResult result;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + config.output_dir.string() + "'");

  for (const DatasetInput& input : config.inputs) {
    result.datasets.push_back(run_dataset(config, input, gazetteer,
                                          config.output_dir / input.name, &result.outputs));
  }
  const fs::path report_path = config.output_dir / "run_report.ndjson";
  write_file_atomic(report_path, [&](std::ostream& os) {
    for (const DatasetReport& r : result.datasets) os << r.to_json_line() << '\n';
  });
  result.outputs.push_back(report_path);

  for (std::size_t i = 1; i < config.inputs.size(); ++i) {
    const std::string& a = config.inputs[0].name;
    const std::string& b = config.inputs[i].name;
    const fs::path out = config.output_dir / ("comparison-" + a + "-" + b + ".ndjson");
    compare_files(primary_output(config.output_dir / a, config.format),
                  primary_output(config.output_dir / b, config.format), out);
    result.outputs.push_back(out);
  }
  return result;
}

}  // namespace mobility
