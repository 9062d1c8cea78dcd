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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobility/aggregate.hpp"

namespace mobility {

// Extra columns written when verbose output is requested.
struct DetailColumns {
  Summary m_max;
  Summary m_bb;
  Summary m_ch;
  std::optional<double> pct_change;

  friend bool operator==(const DetailColumns& a, const DetailColumns& b) {
    const auto same = [](const Summary& x, const Summary& y) {
      return x.mean == y.mean && x.median == y.median && x.q1 == y.q1 &&
             x.q3 == y.q3;
    };
    return same(a.m_max, b.m_max) && same(a.m_bb, b.m_bb) &&
           same(a.m_ch, b.m_ch) && a.pct_change == b.pct_change;
  }
};

// One published row. Values are already rounded to their printed precision
// (km to 3 decimals, index and pct change to 1), so parse(serialize(r)) == r.
struct OutputRecord {
  std::string country_code;
  std::string admin_level;  // "admin1" or "admin2"
  std::string admin1;
  std::string admin2;
  std::string region_id;
  std::string date;  // yyyy-mm-dd
  std::uint64_t samples = 0;
  double m50 = 0.0;
  std::optional<double> m50_index;
  std::optional<DetailColumns> detail;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

double round_km(double v) noexcept;     // 3 decimals
double round_index(double v) noexcept;  // 1 decimal

OutputRecord to_output_record(const RegionDayStats& stats, bool verbose);

// Canonical order: (country_code, admin1, admin2, date, region_id).
void sort_records(std::vector<OutputRecord>& records);

std::vector<std::string> csv_header(bool verbose);

std::string to_ndjson_line(const OutputRecord& r);
void write_ndjson(std::span<const OutputRecord> records, std::ostream& out);
void write_csv(std::span<const OutputRecord> records, std::ostream& out,
               bool verbose);

// RFC-4180 field quoting.
std::string csv_escape(std::string_view field);

// Throws Error(data) on anything that is not a valid record.
OutputRecord parse_ndjson_record(std::string_view line);
std::vector<OutputRecord> read_ndjson(std::istream& in);

// RFC-4180 reader; accepts LF or CRLF row terminators.
std::vector<std::vector<std::string>> read_csv_rows(std::istream& in);
std::vector<OutputRecord> read_csv(std::istream& in);

// Writes to "<path>.tmp" and renames over path once the writer returns.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace mobility
