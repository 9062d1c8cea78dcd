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

// m50: command-line front end for the mobility pipeline.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobility/mobility.h"

namespace {

constexpr int kExitOk = 0;

struct Failure {
  mob_status status;
  std::string message;
};

void check(mob_status s) {
  if (s != MOB_OK) throw Failure{s, mob_last_error()};
}

int report(const Failure& f) {
  nlohmann::ordered_json j;
  j["error"] = mob_status_name(f.status);
  j["message"] = f.message;
  std::cerr << j.dump() << '\n';
  return static_cast<int>(f.status);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  mob_string_free(s);
  return out;
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Destroy(p); }
};

// Options shared by `run` and `config-dump`. Values stay empty unless given,
// so only flags the user typed override the config file.
struct PipelineFlags {
  std::string config_file;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> values;
  bool verbose = false;
  bool emit_device_days = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "JSON config file, applied before flags");
    cmd->add_option("-i,--input", inputs, "Input shards as [name=]glob (repeatable)");
    static const std::pair<const char*, const char*> keyed[] = {
        {"gazetteer", "Gazetteer NDJSON file"},
        {"output-dir", "Directory for results"},
        {"format", "ndjson, csv or both"},
        {"accuracy-max-m", "Largest accepted accuracy radius in metres"},
        {"min-reports", "Minimum reports per device-day"},
        {"min-span-hours", "Minimum first-to-last span in hours"},
        {"trim-fraction", "Fraction of farthest reports dropped for m_max"},
        {"baseline-start", "First baseline date (yyyy-mm-dd)"},
        {"baseline-end", "Last baseline date (yyyy-mm-dd)"},
        {"date-from", "Drop device-days before this date"},
        {"date-to", "Drop device-days after this date"},
        {"workers", "Worker threads"},
        {"n-buckets", "Device hash buckets"},
        {"scratch-dir", "Directory for spill files"},
    };
    for (const auto& [key, help] : keyed) {
      cmd->add_option(std::string("--") + key, values[key], help);
    }
    cmd->add_flag("--verbose", verbose, "Add per-metric quartiles to the output");
    cmd->add_flag("--emit-device-days", emit_device_days,
                  "Also write per-device-day metrics");
  }

  void apply(mob_config* cfg) const {
    if (!config_file.empty()) check(mob_config_load_file(cfg, config_file.c_str()));
    if (!inputs.empty()) {
      for (const std::string& in : inputs) check(mob_config_set(cfg, "input", in.c_str()));
    }
    for (const auto& [key, value] : values) {
      if (!value.empty()) check(mob_config_set(cfg, key.c_str(), value.c_str()));
    }
    if (verbose) check(mob_config_set(cfg, "verbose", "true"));
    if (emit_device_days) check(mob_config_set(cfg, "emit-device-days", "true"));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Daily mobility statistics from device position reports"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "off, error, warn, info or debug");
  app.set_version_flag("--version", mob_version());

  PipelineFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Process input shards into region-day tables");
  run_flags.attach(run);

  PipelineFlags dump_flags;
  CLI::App* dump = app.add_subcommand("config-dump", "Print the effective configuration");
  dump_flags.attach(dump);

  std::string cmp_a, cmp_b, cmp_out;
  CLI::App* compare = app.add_subcommand("compare", "Join two output tables");
  compare->add_option("a", cmp_a, "First output file")->required();
  compare->add_option("b", cmp_b, "Second output file")->required();
  compare->add_option("-o,--out", cmp_out, "Comparison NDJSON to write")->required();

  std::string synth_dir;
  std::vector<std::string> synth_sets;
  std::map<std::string, std::string> synth_values;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
  synth->add_option("dir", synth_dir, "Output directory")->required();
  for (const char* key :
       {"seed", "devices", "start", "end", "change-date", "post-change-scale",
        "median-distance-km", "distance-sigma", "daily-jitter", "min-reports-per-day",
        "max-reports-per-day", "short-span-fraction", "missing-day-fraction",
        "inaccurate-fraction", "malformed-fraction", "unmatched-fraction", "shards",
        "gzip", "truth", "center-lat", "center-lon"}) {
    synth->add_option(std::string("--") + key, synth_values[key]);
  }
  synth->add_option("--scale", synth_sets, "DATE=FACTOR distance scale (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report({MOB_ERR_CONFIG, e.what()});
  }

  try {
    check(mob_set_log_level(log_level.c_str()));
    if (*run || *dump) {
      Handle<mob_config, mob_config_destroy> cfg;
      check(mob_config_create(&cfg.p));
      (*run ? run_flags : dump_flags).apply(cfg.p);
      if (*dump) {
        char* text = nullptr;
        check(mob_config_dump(cfg.p, &text));
        std::cout << take(text) << '\n';
        return kExitOk;
      }
      char* text = nullptr;
      check(mob_run(cfg.p, &text));
      std::cout << take(text);
      return kExitOk;
    }
    if (*compare) {
      char* text = nullptr;
      check(mob_compare(cmp_a.c_str(), cmp_b.c_str(), cmp_out.c_str(), &text));
      std::cout << take(text) << '\n';
      return kExitOk;
    }
    Handle<mob_scenario, mob_scenario_destroy> sc;
    check(mob_scenario_create(&sc.p));
    for (const auto& [key, value] : synth_values) {
      if (!value.empty()) check(mob_scenario_set(sc.p, key.c_str(), value.c_str()));
    }
    for (const std::string& s : synth_sets) check(mob_scenario_set(sc.p, "scale", s.c_str()));
    char* text = nullptr;
    check(mob_scenario_generate(sc.p, synth_dir.c_str(), &text));
    std::cout << take(text) << '\n';
    return kExitOk;
  } catch (const Failure& f) {
    return report(f);
  }
}
