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

/* C interface to the mobility pipeline.
 *
 * Every function that can fail returns a mob_status; on failure the message
 * is available from mob_last_error() on the same thread until the next call.
 * Strings handed out through char** parameters are owned by the caller and
 * released with mob_string_free().
 */
#ifndef MOBILITY_MOBILITY_H_
#define MOBILITY_MOBILITY_H_

#include <stddef.h>

#if defined(MOBILITY_BUILDING_LIBRARY)
#define MOB_API __attribute__((visibility("default")))
#else
#define MOB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mob_status {
  MOB_OK = 0,
  MOB_ERR_CONFIG = 1,
  MOB_ERR_IO = 2,
  MOB_ERR_DATA = 3,
  MOB_ERR_INTERNAL = 4
} mob_status;

typedef struct mob_config mob_config;
typedef struct mob_scenario mob_scenario;
typedef struct mob_gazetteer mob_gazetteer;

MOB_API const char* mob_version(void);
MOB_API const char* mob_last_error(void);
MOB_API const char* mob_status_name(mob_status status);
MOB_API void mob_string_free(char* s);

/* "off", "error", "warn", "info" or "debug". */
MOB_API mob_status mob_set_log_level(const char* level);

/* Pipeline configuration. Keys are the kebab-case option names, e.g.
 * "accuracy-max-m" or "input" (repeatable, "[name=]glob"). */
MOB_API mob_status mob_config_create(mob_config** out);
MOB_API void mob_config_destroy(mob_config* config);
MOB_API mob_status mob_config_set(mob_config* config, const char* key,
                                  const char* value);
MOB_API mob_status mob_config_load_file(mob_config* config, const char* path);
MOB_API mob_status mob_config_validate(const mob_config* config);
MOB_API mob_status mob_config_dump(const mob_config* config, char** json_out);

/* Runs every configured dataset. report_out (may be NULL) receives the run
 * report as NDJSON, one line per dataset. */
MOB_API mob_status mob_run(const mob_config* config, char** report_out);

/* Joins two output files (.ndjson or .csv) and writes the comparison as
 * NDJSON to out_path. summary_out (may be NULL) receives a JSON object with
 * row counts. */
MOB_API mob_status mob_compare(const char* a_path, const char* b_path,
                               const char* out_path, char** summary_out);

/* Synthetic data. */
MOB_API mob_status mob_scenario_create(mob_scenario** out);
MOB_API void mob_scenario_destroy(mob_scenario* scenario);
MOB_API mob_status mob_scenario_set(mob_scenario* scenario, const char* key,
                                    const char* value);
MOB_API mob_status mob_scenario_generate(const mob_scenario* scenario,
                                         const char* dir, char** summary_out);

/* Gazetteer lookups. Strings in mob_region point into the gazetteer and stay
 * valid until it is destroyed. */
typedef struct mob_region {
  const char* country_code;
  const char* admin1;
  const char* admin2;
  const char* region_id;
  int admin_level; /* 0 country, 1 admin1, 2 admin2 */
} mob_region;

MOB_API mob_status mob_gazetteer_load(const char* path, mob_gazetteer** out);
MOB_API void mob_gazetteer_destroy(mob_gazetteer* gazetteer);
MOB_API size_t mob_gazetteer_region_count(const mob_gazetteer* gazetteer);
/* *found is set to 0 when no region contains the point. */
MOB_API mob_status mob_gazetteer_locate(const mob_gazetteer* gazetteer,
                                        double lat, double lon,
                                        mob_region* out, int* found);

MOB_API double mob_haversine_km(double lat1, double lon1, double lat2,
                                double lon2);
MOB_API int mob_solar_tz_offset_hours(double lon);

#ifdef __cplusplus
}
#endif

#endif /* MOBILITY_MOBILITY_H_ */
