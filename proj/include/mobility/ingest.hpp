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
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "mobility/geo.hpp"

namespace mobility {

class LineReader;

// One location fix as delivered by a vendor feed.
struct PositionReport {
  std::string device_id;
  std::int64_t epoch_s = 0;
  GeoPoint point;
  double accuracy_m = 0.0;

  friend bool operator==(const PositionReport&, const PositionReport&) = default;
};

struct Malformed {
  std::string reason;
};

using ParsedLine = std::variant<PositionReport, Malformed>;

// Parses `device_id,epoch_s,lat,lon,accuracy_m`. Never throws on bad input.
ParsedLine parse_report_line(std::string_view line);

inline constexpr double kDefaultAccuracyMaxM = 50.0;

// Keeps reports whose accuracy estimate is at most threshold_m.
inline bool accuracy_filter(const PositionReport& r, double threshold_m) noexcept {
  return r.accuracy_m <= threshold_m;
}

// Every counted line lands in exactly one of the three outcome buckets. A
// skipped header line is not counted.
struct IngestStats {
  std::uint64_t lines_read = 0;
  std::uint64_t lines_malformed = 0;
  std::uint64_t reports_accepted = 0;
  std::uint64_t reports_rejected_accuracy = 0;

  IngestStats& operator+=(const IngestStats& o) noexcept {
    lines_read += o.lines_read;
    lines_malformed += o.lines_malformed;
    reports_accepted += o.reports_accepted;
    reports_rejected_accuracy += o.reports_rejected_accuracy;
    return *this;
  }

  bool reconciles() const noexcept {
    return lines_read ==
           lines_malformed + reports_accepted + reports_rejected_accuracy;
  }

  friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

struct IngestConfig {
  double accuracy_max_m = kDefaultAccuracyMaxM;
};

// Streams accepted reports out of one shard, in file order.
class ShardReader {
 public:
  ShardReader(const std::filesystem::path& path, IngestConfig config);
  ~ShardReader();

  ShardReader(const ShardReader&) = delete;
  ShardReader& operator=(const ShardReader&) = delete;

  bool next(PositionReport& out);

  const IngestStats& stats() const noexcept { return stats_; }

 private:
  std::unique_ptr<LineReader> lines_;
  IngestConfig config_;
  IngestStats stats_;
  bool first_line_ = true;
};

IngestStats read_shard(const std::filesystem::path& path, IngestConfig config,
                       const std::function<void(PositionReport&&)>& sink);

}  // namespace mobility
