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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "mobility/error.hpp"

namespace mobility {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kMetricNames[] = {"m_max", "m_bb", "m_ch"};
constexpr const char* kSummaryNames[] = {"mean", "median", "q1", "q3"};

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v + 0.0);
  return buf;
}

Summary round_summary(const Summary& s) {
  return {round_km(s.mean), round_km(s.median), round_km(s.q1), round_km(s.q3)};
}

const Summary& metric(const DetailColumns& d, int i) {
  return i == 0 ? d.m_max : (i == 1 ? d.m_bb : d.m_ch);
}
Summary& metric(DetailColumns& d, int i) {
  return i == 0 ? d.m_max : (i == 1 ? d.m_bb : d.m_ch);
}
double summary_field(const Summary& s, int j) {
  switch (j) {
    case 0:
      return s.mean;
    case 1:
      return s.median;
    case 2:
      return s.q1;
    default:
      return s.q3;
  }
}
double& summary_field(Summary& s, int j) {
  switch (j) {
    case 0:
      return s.mean;
    case 1:
      return s.median;
    case 2:
      return s.q1;
    default:
      return s.q3;
  }
}

std::string detail_key(int metric_index, int field_index) {
  return std::string(kMetricNames[metric_index]) + "_" + kSummaryNames[field_index];
}

// Cells in csv_header order.
std::vector<std::string> cells(const OutputRecord& r) {
  std::vector<std::string> c = {r.country_code,
                                r.admin_level,
                                r.admin1,
                                r.admin2,
                                r.region_id,
                                r.date,
                                std::to_string(r.samples),
                                fixed(r.m50, 3),
                                r.m50_index ? fixed(*r.m50_index, 1) : ""};
  if (r.detail) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) {
        c.push_back(fixed(summary_field(metric(*r.detail, i), j), 3));
      }
    }
    c.push_back(r.detail->pct_change ? fixed(*r.detail->pct_change, 1) : "");
  }
  return c;
}

double parse_decimal(const std::string& s, const char* what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw data_error(std::string("bad ") + what + " value '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, const char* what) {
  if (s.empty()) return std::nullopt;
  return parse_decimal(s, what);
}

}  // namespace

double round_km(double v) noexcept { return std::round(v * 1000.0) / 1000.0 + 0.0; }
double round_index(double v) noexcept { return std::round(v * 10.0) / 10.0 + 0.0; }

OutputRecord to_output_record(const RegionDayStats& stats, bool verbose) {
  OutputRecord r;
  r.country_code = stats.region.country_code;
  r.admin_level = to_string(admin_level(stats.region));
  r.admin1 = stats.region.admin1;
  r.admin2 = stats.region.admin2;
  r.region_id = stats.region.region_id;
  r.date = stats.date.iso();
  r.samples = stats.samples;
  r.m50 = round_km(stats.m50);
  if (stats.m50_index) r.m50_index = round_index(*stats.m50_index);
  if (verbose) {
    DetailColumns d;
    d.m_max = round_summary(stats.m_max);
    d.m_bb = round_summary(stats.m_bb);
    d.m_ch = round_summary(stats.m_ch);
    if (r.m50_index) d.pct_change = round_index(*r.m50_index - 100.0);
    r.detail = d;
  }
  return r;
}

void sort_records(std::vector<OutputRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const OutputRecord& a, const OutputRecord& b) {
              return std::tie(a.country_code, a.admin1, a.admin2, a.date,
                              a.region_id) < std::tie(b.country_code, b.admin1,
                                                      b.admin2, b.date,
                                                      b.region_id);
            });
}

std::vector<std::string> csv_header(bool verbose) {
  std::vector<std::string> h = {"country_code", "admin_level", "admin1",
                                "admin2",       "region_id",   "date",
                                "samples",      "m50",         "m50_index"};
  if (verbose) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) h.push_back(detail_key(i, j));
    }
    h.push_back("pct_change");
  }
  return h;
}

std::string to_ndjson_line(const OutputRecord& r) {
  const auto header = csv_header(r.detail.has_value());
  const auto values = cells(r);
  std::string line = "{";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != 0) line += ',';
    line += json(header[i]).dump();
    line += ':';
    if (i < 6) {
      line += json(values[i]).dump();
    } else if (values[i].empty()) {
      line += "null";
    } else {
      line += values[i];
    }
  }
  line += '}';
  return line;
}

void write_ndjson(std::span<const OutputRecord> records, std::ostream& out) {
  for (const OutputRecord& r : records) out << to_ndjson_line(r) << '\n';
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::span<const OutputRecord> records, std::ostream& out,
               bool verbose) {
  const auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i != 0) out << ',';
      out << csv_escape(row[i]);
    }
    out << '\n';
  };
  write_row(csv_header(verbose));
  for (const OutputRecord& r : records) {
    if (r.detail.has_value() != verbose) {
      throw std::invalid_argument("record verbosity does not match CSV header");
    }
    write_row(cells(r));
  }
}

OutputRecord parse_ndjson_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw data_error(std::string("invalid NDJSON record: ") + e.what());
  }
  if (!j.is_object()) throw data_error("NDJSON record is not an object");
  try {
    OutputRecord r;
    r.country_code = j.at("country_code").get<std::string>();
    r.admin_level = j.at("admin_level").get<std::string>();
    r.admin1 = j.at("admin1").get<std::string>();
    r.admin2 = j.at("admin2").get<std::string>();
    r.region_id = j.at("region_id").get<std::string>();
    r.date = j.at("date").get<std::string>();
    r.samples = j.at("samples").get<std::uint64_t>();
    r.m50 = j.at("m50").get<double>();
    if (!j.at("m50_index").is_null()) r.m50_index = j.at("m50_index").get<double>();
    if (j.contains("m_max_mean")) {
      DetailColumns d;
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 4; ++k) {
          summary_field(metric(d, i), k) = j.at(detail_key(i, k)).get<double>();
        }
      }
      if (!j.at("pct_change").is_null()) d.pct_change = j.at("pct_change").get<double>();
      r.detail = d;
    }
    return r;
  } catch (const json::exception& e) {
    throw data_error(std::string("invalid NDJSON record: ") + e.what());
  }
}

std::vector<OutputRecord> read_ndjson(std::istream& in) {
  std::vector<OutputRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_ndjson_record(line));
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  char c = 0;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_started = true;
        break;
      case '\r':
        if (in.peek() != '\n') field += c;
        break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
        break;
      default:
        field += c;
        row_started = true;
    }
  }
  if (in_quotes) throw data_error("unterminated quoted CSV field");
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<OutputRecord> read_csv(std::istream& in) {
  const auto rows = read_csv_rows(in);
  if (rows.empty()) throw data_error("CSV has no header row");
  bool verbose = false;
  if (rows[0] == csv_header(true)) {
    verbose = true;
  } else if (rows[0] != csv_header(false)) {
    throw data_error("unexpected CSV header");
  }
  const std::size_t width = rows[0].size();
  std::vector<OutputRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (c.size() != width) {
      throw data_error("CSV row " + std::to_string(i) + " has " +
                       std::to_string(c.size()) + " cells, expected " +
                       std::to_string(width));
    }
    OutputRecord r;
    r.country_code = c[0];
    r.admin_level = c[1];
    r.admin1 = c[2];
    r.admin2 = c[3];
    r.region_id = c[4];
    r.date = c[5];
    std::uint64_t samples = 0;
    auto [ptr, ec] = std::from_chars(c[6].data(), c[6].data() + c[6].size(), samples);
    if (ec != std::errc() || ptr != c[6].data() + c[6].size()) {
      throw data_error("bad samples value '" + c[6] + "'");
    }
    r.samples = samples;
    r.m50 = parse_decimal(c[7], "m50");
    r.m50_index = parse_optional(c[8], "m50_index");
    if (verbose) {
      DetailColumns d;
      std::size_t col = 9;
      for (int m = 0; m < 3; ++m) {
        for (int k = 0; k < 4; ++k) {
          summary_field(metric(d, m), k) = parse_decimal(c[col++], "summary");
        }
      }
      d.pct_change = parse_optional(c[col], "pct_change");
      r.detail = d;
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_file_atomic(const fs::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot create '" + tmp.string() + "'");
    try {
      writer(out);
    } catch (...) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw io_error("write failed on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

}  // namespace mobility
