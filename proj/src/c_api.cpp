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

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "mobility/compare.hpp"
#include "mobility/config.hpp"
#include "mobility/error.hpp"
#include "mobility/geo.hpp"
#include "mobility/geocode.hpp"
#include "mobility/pipeline.hpp"
#include "mobility/synth.hpp"

struct mob_config {
  mobility::PipelineConfig config;
};

struct mob_scenario {
  mobility::ScenarioSpec spec;
};

struct mob_gazetteer {
  mobility::Gazetteer gazetteer;
};

namespace {

thread_local std::string last_error;

mob_status fail(mob_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename Fn>
mob_status guarded(Fn&& fn) noexcept {
  try {
    last_error.clear();
    fn();
    return MOB_OK;
  } catch (const mobility::Error& e) {
    return fail(static_cast<mob_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MOB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MOB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MOB_ERR_INTERNAL, "unknown error");
  }
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw mobility::config_error(std::string(what) + " is NULL");
}

}  // namespace

extern "C" {

const char* mob_version(void) { return "0.1.0"; }

const char* mob_last_error(void) { return last_error.c_str(); }

const char* mob_status_name(mob_status status) {
  switch (status) {
    case MOB_OK:
      return "ok";
    case MOB_ERR_CONFIG:
      return "config";
    case MOB_ERR_IO:
      return "io";
    case MOB_ERR_DATA:
      return "data";
    case MOB_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void mob_string_free(char* s) { std::free(s); }

mob_status mob_set_log_level(const char* level) {
  return guarded([&] {
    require(level, "level");
    const std::string l = level;
    if (l == "off") {
      spdlog::set_level(spdlog::level::off);
    } else if (l == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (l == "warn") {
      spdlog::set_level(spdlog::level::warn);
    } else if (l == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (l == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else {
      throw mobility::config_error("unknown log level '" + l + "'");
    }
  });
}

mob_status mob_config_create(mob_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new mob_config();
  });
}

void mob_config_destroy(mob_config* config) { delete config; }

mob_status mob_config_set(mob_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->config.set(key, value);
  });
}

mob_status mob_config_load_file(mob_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->config.load_file(path);
  });
}

mob_status mob_config_validate(const mob_config* config) {
  return guarded([&] {
    require(config, "config");
    config->config.validate(false);
  });
}

mob_status mob_config_dump(const mob_config* config, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    config->config.validate(false);
    *json_out = copy_out(config->config.to_json());
  });
}

mob_status mob_run(const mob_config* config, char** report_out) {
  return guarded([&] {
    require(config, "config");
    const mobility::RunResult result = mobility::run_pipeline(config->config);
    if (report_out != nullptr) {
      std::string text;
      for (const auto& d : result.datasets) text += d.to_json_line() + "\n";
      *report_out = copy_out(text);
    }
  });
}

mob_status mob_compare(const char* a_path, const char* b_path, const char* out_path,
                       char** summary_out) {
  return guarded([&] {
    require(a_path, "a_path");
    require(b_path, "b_path");
    require(out_path, "out_path");
    const auto s = mobility::compare_files(a_path, b_path, out_path);
    if (summary_out != nullptr) {
      nlohmann::ordered_json j;
      j["rows"] = s.rows;
      j["both"] = s.both;
      j["only_a"] = s.only_a;
      j["only_b"] = s.only_b;
      *summary_out = copy_out(j.dump());
    }
  });
}

mob_status mob_scenario_create(mob_scenario** out) {
  return guarded([&] {
    require(out, "out");
    *out = new mob_scenario();
  });
}

void mob_scenario_destroy(mob_scenario* scenario) { delete scenario; }

mob_status mob_scenario_set(mob_scenario* scenario, const char* key, const char* value) {
  return guarded([&] {
    require(scenario, "scenario");
    require(key, "key");
    require(value, "value");
    mobility::set_scenario_option(scenario->spec, key, value);
  });
}

mob_status mob_scenario_generate(const mob_scenario* scenario, const char* dir,
                                 char** summary_out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(dir, "dir");
    const auto g = mobility::generate(scenario->spec, dir);
    if (summary_out != nullptr) {
      nlohmann::ordered_json j;
      nlohmann::ordered_json shards = nlohmann::ordered_json::array();
      for (const auto& p : g.shards) shards.push_back(p.string());
      j["shards"] = shards;
      j["gazetteer"] = g.gazetteer.string();
      j["truth"] = g.truth.empty() ? nlohmann::ordered_json(nullptr)
                                   : nlohmann::ordered_json(g.truth.string());
      j["data_lines"] = g.data_lines;
      j["malformed_lines"] = g.malformed_lines;
      j["rejected_accuracy"] = g.rejected_accuracy;
      j["accepted"] = g.accepted;
      j["truth_device_days"] = g.truth_device_days;
      *summary_out = copy_out(j.dump());
    }
  });
}

mob_status mob_gazetteer_load(const char* path, mob_gazetteer** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new mob_gazetteer{mobility::Gazetteer::load(path)};
  });
}

void mob_gazetteer_destroy(mob_gazetteer* gazetteer) { delete gazetteer; }

size_t mob_gazetteer_region_count(const mob_gazetteer* gazetteer) {
  return gazetteer ? gazetteer->gazetteer.regions().size() : 0;
}

mob_status mob_gazetteer_locate(const mob_gazetteer* gazetteer, double lat, double lon,
                                mob_region* out, int* found) {
  return guarded([&] {
    require(gazetteer, "gazetteer");
    require(out, "out");
    require(found, "found");
    const auto p = mobility::make_geo_point(lat, lon);
    if (!p) throw mobility::config_error("coordinate out of range");
    *found = 0;
    *out = mob_region{};
    if (const mobility::Region* r = gazetteer->gazetteer.locate(*p)) {
      *found = 1;
      out->country_code = r->key.country_code.c_str();
      out->admin1 = r->key.admin1.c_str();
      out->admin2 = r->key.admin2.c_str();
      out->region_id = r->key.region_id.c_str();
      out->admin_level = static_cast<int>(mobility::admin_level(r->key));
    }
  });
}

double mob_haversine_km(double lat1, double lon1, double lat2, double lon2) {
  return mobility::haversine_km({lat1, lon1}, {lat2, lon2});
}

int mob_solar_tz_offset_hours(double lon) { return mobility::solar_tz_offset_hours(lon); }

}  // extern "C"
