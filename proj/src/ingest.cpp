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

#include "mobility/ingest.hpp"

#include <spdlog/spdlog.h>

#include <array>
#include <charconv>
#include <cmath>

#include "mobility/line_reader.hpp"

namespace mobility {

namespace {

constexpr std::size_t kFields = 5;

// Splits on commas into at most out.size() fields. Returns the true field
// count, which may exceed out.size().
std::size_t split_fields(std::string_view line,
                         std::array<std::string_view, kFields>& out) {
  std::size_t n = 0;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const std::string_view field =
        line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - start);
    if (n < out.size()) out[n] = field;
    ++n;
    if (comma == std::string_view::npos) return n;
    start = comma + 1;
  }
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool looks_like_header(std::string_view line) {
  const std::size_t comma = line.find(',');
  if (comma == std::string_view::npos) return false;
  std::string_view second = line.substr(comma + 1);
  second = second.substr(0, second.find(','));
  std::int64_t ignored = 0;
  return !parse_number(second, ignored);
}

}  // namespace

ParsedLine parse_report_line(std::string_view line) {
  std::array<std::string_view, kFields> f;
  const std::size_t n = split_fields(line, f);
  if (n != kFields) {
    return Malformed{"expected 5 fields, got " + std::to_string(n)};
  }
  PositionReport r;
  if (f[0].empty()) return Malformed{"empty device id"};
  if (!parse_number(f[1], r.epoch_s)) return Malformed{"bad epoch"};
  if (r.epoch_s < 0) return Malformed{"negative epoch"};
  double lat = 0.0, lon = 0.0;
  if (!parse_number(f[2], lat)) return Malformed{"bad latitude"};
  if (!parse_number(f[3], lon)) return Malformed{"bad longitude"};
  if (!parse_number(f[4], r.accuracy_m)) return Malformed{"bad accuracy"};
  if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0) {
    return Malformed{"latitude out of range"};
  }
  if (!std::isfinite(lon) || lon < -180.0 || lon > 180.0) {
    return Malformed{"longitude out of range"};
  }
  if (!std::isfinite(r.accuracy_m) || r.accuracy_m < 0.0) {
    return Malformed{"negative or non-finite accuracy"};
  }
  r.point = *make_geo_point(lat, lon);
  r.device_id.assign(f[0]);
  return r;
}

ShardReader::ShardReader(const std::filesystem::path& path, IngestConfig config)
    : lines_(std::make_unique<LineReader>(path)), config_(config) {}

ShardReader::~ShardReader() = default;

bool ShardReader::next(PositionReport& out) {
  std::string_view line;
  while (lines_->next(line)) {
    if (first_line_) {
      first_line_ = false;
      if (looks_like_header(line)) continue;
    }
    ++stats_.lines_read;
    ParsedLine parsed = parse_report_line(line);
    if (auto* bad = std::get_if<Malformed>(&parsed)) {
      ++stats_.lines_malformed;
      spdlog::debug("{}:{}: malformed line: {}", lines_->path().string(),
                    stats_.lines_read, bad->reason);
      continue;
    }
    auto& report = std::get<PositionReport>(parsed);
    if (!accuracy_filter(report, config_.accuracy_max_m)) {
      ++stats_.reports_rejected_accuracy;
      continue;
    }
    ++stats_.reports_accepted;
    out = std::move(report);
    return true;
  }
  return false;
}

IngestStats read_shard(const std::filesystem::path& path, IngestConfig config,
                       const std::function<void(PositionReport&&)>& sink) {
  ShardReader reader(path, config);
  PositionReport r;
  while (reader.next(r)) sink(std::move(r));
  return reader.stats();
}

}  // namespace mobility
