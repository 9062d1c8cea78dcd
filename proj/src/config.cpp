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

#include "mobility/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mobility/error.hpp"

namespace mobility {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string in_quotes(std::string_view s) { return "'" + std::string(s) + "'"; }

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw config_error(std::string(key) + ": expected a number, got " + in_quotes(v));
  }
  return out;
}

std::uint64_t to_count(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw config_error(std::string(key) + ": expected a non-negative integer, got " +
                       in_quotes(v));
  }
  return out;
}

LocalDate to_date(std::string_view key, std::string_view v) {
  auto d = LocalDate::parse(v);
  if (!d) throw config_error(std::string(key) + ": expected yyyy-mm-dd, got " + in_quotes(v));
  return *d;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error(std::string(key) + ": expected true or false, got " + in_quotes(v));
}

// JSON scalar -> the string form set() expects.
std::string scalar_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw config_error(key + ": unsupported JSON value " + v.dump());
}

}  // namespace

const char* to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::ndjson:
      return "ndjson";
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::both:
      return "both";
  }
  return "unknown";
}

const std::vector<std::string>& PipelineConfig::option_keys() {
  static const std::vector<std::string> keys = {
      "input",          "gazetteer",      "output-dir",   "format",
      "accuracy-max-m", "min-reports",    "min-span-hours", "trim-fraction",
      "baseline-start", "baseline-end",   "date-from",    "date-to",
      "workers",        "n-buckets",      "scratch-dir",  "verbose",
      "emit-device-days"};
  return keys;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  if (key == "input") {
    if (value.empty()) throw config_error("input: empty glob");
    std::string name;
    std::string glob(value);
    if (const auto eq = value.find('='); eq != std::string_view::npos) {
      name.assign(value.substr(0, eq));
      glob.assign(value.substr(eq + 1));
      if (name.empty() || glob.empty()) {
        throw config_error("input: expected [name=]glob, got " + in_quotes(value));
      }
    } else {
      name = "default";
    }
    for (DatasetInput& in : inputs) {
      if (in.name == name) {
        in.globs.push_back(glob);
        return;
      }
    }
    inputs.push_back({name, {glob}});
  } else if (key == "gazetteer") {
    gazetteer = std::string(value);
  } else if (key == "output-dir") {
    output_dir = std::string(value);
  } else if (key == "format") {
    if (value == "ndjson") {
      format = OutputFormat::ndjson;
    } else if (value == "csv") {
      format = OutputFormat::csv;
    } else if (value == "both") {
      format = OutputFormat::both;
    } else {
      throw config_error("format: expected ndjson, csv or both, got " + in_quotes(value));
    }
  } else if (key == "accuracy-max-m") {
    accuracy_max_m = to_double(key, value);
  } else if (key == "min-reports") {
    min_reports = to_count(key, value);
  } else if (key == "min-span-hours") {
    min_span_hours = to_double(key, value);
  } else if (key == "trim-fraction") {
    trim_fraction = to_double(key, value);
  } else if (key == "baseline-start") {
    baseline_start = to_date(key, value);
  } else if (key == "baseline-end") {
    baseline_end = to_date(key, value);
  } else if (key == "date-from") {
    date_from = value.empty() ? std::nullopt : std::optional(to_date(key, value));
  } else if (key == "date-to") {
    date_to = value.empty() ? std::nullopt : std::optional(to_date(key, value));
  } else if (key == "workers") {
    workers = to_count(key, value);
  } else if (key == "n-buckets") {
    n_buckets = to_count(key, value);
  } else if (key == "scratch-dir") {
    scratch_dir = std::string(value);
  } else if (key == "verbose") {
    verbose = to_bool(key, value);
  } else if (key == "emit-device-days") {
    emit_device_days = to_bool(key, value);
  } else {
    throw config_error("unknown option " + in_quotes(key));
  }
}

void PipelineConfig::merge_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (value.is_null()) {
      if (key == "date-from") {
        date_from.reset();
      } else if (key == "date-to") {
        date_to.reset();
      } else {
        set(key, "");  // rejected below for anything that needs a value
      }
      continue;
    }
    if (key == "input") {
      inputs.clear();
      if (value.is_array()) {
        for (const json& v : value) set(key, scalar_text(key, v));
      } else {
        set(key, scalar_text(key, value));
      }
      continue;
    }
    set(key, scalar_text(key, value));
  }
}

void PipelineConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  merge_json(buf.str());
}

std::string PipelineConfig::to_json() const {
  ordered_json j;
  ordered_json in = ordered_json::array();
  for (const DatasetInput& d : inputs) {
    for (const std::string& g : d.globs) in.push_back(d.name + "=" + g);
  }
  j["input"] = in;
  j["gazetteer"] = gazetteer.string();
  j["output-dir"] = output_dir.string();
  j["format"] = to_string(format);
  j["accuracy-max-m"] = accuracy_max_m;
  j["min-reports"] = min_reports;
  j["min-span-hours"] = min_span_hours;
  j["trim-fraction"] = trim_fraction;
  j["baseline-start"] = baseline_start.iso();
  j["baseline-end"] = baseline_end.iso();
  j["date-from"] = date_from ? ordered_json(date_from->iso()) : ordered_json(nullptr);
  j["date-to"] = date_to ? ordered_json(date_to->iso()) : ordered_json(nullptr);
  j["workers"] = workers;
  j["n-buckets"] = n_buckets;
  j["scratch-dir"] = scratch_dir.string();
  j["verbose"] = verbose;
  j["emit-device-days"] = emit_device_days;
  return j.dump(2);
}

void PipelineConfig::validate(bool for_run) const {
  if (!(accuracy_max_m > 0.0)) throw config_error("accuracy-max-m must be > 0");
  if (min_reports < 1) throw config_error("min-reports must be >= 1");
  if (min_span_hours < 0.0) throw config_error("min-span-hours must be >= 0");
  if (trim_fraction < 0.0 || trim_fraction >= 1.0) {
    throw config_error("trim-fraction must lie in [0, 1)");
  }
  if (baseline_end < baseline_start) {
    throw config_error("baseline-end precedes baseline-start");
  }
  if (date_from && date_to && *date_to < *date_from) {
    throw config_error("date-to precedes date-from");
  }
  if (workers < 1) throw config_error("workers must be >= 1");
  if (n_buckets < 1) throw config_error("n-buckets must be >= 1");
  if (!for_run) return;
  if (inputs.empty()) throw config_error("no input datasets given");
  if (gazetteer.empty()) throw config_error("gazetteer path not set");
  if (output_dir.empty()) throw config_error("output-dir not set");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string& name = inputs[i].name;
    if (name.find('/') != std::string::npos || name == "." || name == "..") {
      throw config_error("dataset name " + in_quotes(name) + " is not a valid directory name");
    }
  }
}

std::filesystem::path PipelineConfig::scratch_root() const {
  return scratch_dir.empty() ? output_dir / ".scratch" : scratch_dir;
}

void set_scenario_option(ScenarioSpec& spec, std::string_view key, std::string_view value) {
  if (key == "seed") {
    spec.seed = to_count(key, value);
  } else if (key == "devices") {
    spec.devices = to_count(key, value);
  } else if (key == "start") {
    spec.start = to_date(key, value);
  } else if (key == "end") {
    spec.end = to_date(key, value);
  } else if (key == "change-date") {
    spec.change_date = to_date(key, value);
  } else if (key == "post-change-scale") {
    spec.post_change_scale = to_double(key, value);
  } else if (key == "scale") {
    const auto eq = value.find('=');
    if (eq == std::string_view::npos) {
      throw config_error("scale: expected DATE=FACTOR, got " + in_quotes(value));
    }
    spec.scale_overrides[to_date(key, value.substr(0, eq))] =
        to_double(key, value.substr(eq + 1));
  } else if (key == "median-distance-km") {
    spec.median_distance_km = to_double(key, value);
  } else if (key == "distance-sigma") {
    spec.distance_sigma = to_double(key, value);
  } else if (key == "daily-jitter") {
    spec.daily_jitter = to_double(key, value);
  } else if (key == "min-reports-per-day") {
    spec.min_reports_per_day = static_cast<int>(to_count(key, value));
  } else if (key == "max-reports-per-day") {
    spec.max_reports_per_day = static_cast<int>(to_count(key, value));
  } else if (key == "short-span-fraction") {
    spec.short_span_fraction = to_double(key, value);
  } else if (key == "missing-day-fraction") {
    spec.missing_day_fraction = to_double(key, value);
  } else if (key == "inaccurate-fraction") {
    spec.inaccurate_fraction = to_double(key, value);
  } else if (key == "malformed-fraction") {
    spec.malformed_fraction = to_double(key, value);
  } else if (key == "unmatched-fraction") {
    spec.unmatched_fraction = to_double(key, value);
  } else if (key == "shards") {
    spec.shards = to_count(key, value);
  } else if (key == "gzip") {
    spec.gzip = to_bool(key, value);
  } else if (key == "truth") {
    spec.write_truth = to_bool(key, value);
  } else if (key == "center-lat") {
    spec.center_lat = to_double(key, value);
  } else if (key == "center-lon") {
    spec.center_lon = to_double(key, value);
  } else {
    throw config_error("unknown scenario option " + in_quotes(key));
  }
}

}  // namespace mobility
