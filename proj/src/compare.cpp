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

#include "mobility/compare.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "mobility/error.hpp"

namespace mobility {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using JoinKey = std::tuple<std::string, std::string, std::string, std::string,
                           std::string, std::string>;

JoinKey join_key(const OutputRecord& r) {
  return {r.country_code, r.admin_level, r.admin1, r.admin2, r.region_id, r.date};
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

}  // namespace

const char* to_string(CompareStatus s) noexcept {
  switch (s) {
    case CompareStatus::both:
      return "both";
    case CompareStatus::only_a:
      return "only_a";
    case CompareStatus::only_b:
      return "only_b";
  }
  return "unknown";
}

LoadedOutput load_output(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  LoadedOutput out;
  if (path.extension() == ".csv") {
    std::string header;
    std::getline(in, header);
    in.clear();
    in.seekg(0);
    std::istringstream first(header + "\n");
    const auto rows = read_csv_rows(first);
    if (!rows.empty()) out.columns = rows.front();
    out.records = read_csv(in);
    return out;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (out.columns.empty()) {
      try {
        const ordered_json j = ordered_json::parse(line);
        if (j.is_object()) {
          for (const auto& item : j.items()) out.columns.push_back(item.key());
        }
      } catch (const ordered_json::exception&) {
        // reported by parse_ndjson_record below
      }
    }
    try {
      out.records.push_back(parse_ndjson_record(line));
    } catch (const Error& e) {
      throw data_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ComparisonRow> compare_outputs(const LoadedOutput& a, const LoadedOutput& b) {
  if (!a.columns.empty() && !b.columns.empty() && a.columns != b.columns) {
    throw data_error("schema mismatch: [" + join(a.columns) + "] vs [" + join(b.columns) +
                     "]");
  }
  std::map<JoinKey, std::pair<const OutputRecord*, const OutputRecord*>> joined;
  for (const OutputRecord& r : a.records) {
    auto& slot = joined[join_key(r)];
    if (slot.first) throw data_error("duplicate row for " + r.region_id + " " + r.date);
    slot.first = &r;
  }
  for (const OutputRecord& r : b.records) {
    auto& slot = joined[join_key(r)];
    if (slot.second) throw data_error("duplicate row for " + r.region_id + " " + r.date);
    slot.second = &r;
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(joined.size());
  for (const auto& [key, pair] : joined) {
    const auto [ra, rb] = pair;
    ComparisonRow row;
    std::tie(row.country_code, row.admin_level, row.admin1, row.admin2, row.region_id,
             row.date) = key;
    row.status = ra && rb ? CompareStatus::both
                          : (ra ? CompareStatus::only_a : CompareStatus::only_b);
    if (ra) {
      row.m50_a = ra->m50;
      row.m50_index_a = ra->m50_index;
    }
    if (rb) {
      row.m50_b = rb->m50;
      row.m50_index_b = rb->m50_index;
    }
    if (row.m50_index_a && row.m50_index_b) {
      row.delta = round_index(*row.m50_index_b - *row.m50_index_a);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string to_ndjson_line(const ComparisonRow& row) {
  const auto number = [](const std::optional<double>& v, int decimals) {
    if (!v) return std::string("null");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, *v + 0.0);
    return std::string(buf);
  };
  std::string line = "{";
  const auto field = [&](const char* name, const std::string& raw) {
    if (line.size() > 1) line += ',';
    line += json(name).dump();
    line += ':';
    line += raw;
  };
  field("country_code", json(row.country_code).dump());
  field("admin_level", json(row.admin_level).dump());
  field("admin1", json(row.admin1).dump());
  field("admin2", json(row.admin2).dump());
  field("region_id", json(row.region_id).dump());
  field("date", json(row.date).dump());
  field("status", json(to_string(row.status)).dump());
  field("m50_a", number(row.m50_a, 3));
  field("m50_b", number(row.m50_b, 3));
  field("m50_index_a", number(row.m50_index_a, 1));
  field("m50_index_b", number(row.m50_index_b, 1));
  field("delta", number(row.delta, 1));
  line += '}';
  return line;
}

ComparisonSummary compare_files(const fs::path& a, const fs::path& b, const fs::path& out) {
  const auto rows = compare_outputs(load_output(a), load_output(b));
  ComparisonSummary summary;
  summary.rows = rows.size();
  for (const ComparisonRow& r : rows) {
    switch (r.status) {
      case CompareStatus::both:
        ++summary.both;
        break;
      case CompareStatus::only_a:
        ++summary.only_a;
        break;
      case CompareStatus::only_b:
        ++summary.only_b;
        break;
    }
  }
  write_file_atomic(out, [&](std::ostream& os) {
    for (const ComparisonRow& r : rows) os << to_ndjson_line(r) << '\n';
  });
  return summary;
}

}  // namespace mobility
