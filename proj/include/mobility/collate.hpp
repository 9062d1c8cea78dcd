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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobility/calendar.hpp"
#include "mobility/ingest.hpp"

namespace mobility {

// Local calendar date of an instant under a fixed whole-hour UTC offset.
LocalDate local_date_for(std::int64_t epoch_s, int tz_offset_hours) noexcept;

struct DayAssignment {
  std::string_view device_id;
  LocalDate local_date;
  int tz_offset_hours = 0;
};

// Per-report solar-time dating, before any per-device refinement.
DayAssignment assign_local_day(const PositionReport& r) noexcept;

// Canonical in-day order: epoch, then (lat, lon, accuracy).
bool report_order(const PositionReport& a, const PositionReport& b) noexcept;

struct DeviceDay {
  std::string device_id;
  LocalDate local_date;
  int tz_offset_hours = 0;
  std::vector<PositionReport> reports;  // sorted by report_order
};

// ---------------------------------------------------------------------------
// Spill files
//
// A spill line is an input line plus a trailing tz_offset_hours column:
//   device_id,epoch_s,lat,lon,accuracy_m,tz_offset_hours
// Doubles are written in shortest round-trip form so re-reading is exact.

struct SpillRecord {
  PositionReport report;
  int tz_offset_hours = 0;
};

std::string format_spill_line(const PositionReport& r, int tz_offset_hours);
std::optional<SpillRecord> parse_spill_line(std::string_view line);

// FNV-1a over the device id bytes.
std::uint64_t device_hash(std::string_view device_id) noexcept;

inline std::size_t bucket_of(std::string_view device_id,
                             std::size_t n_buckets) noexcept {
  return static_cast<std::size_t>(device_hash(device_id) % n_buckets);
}

// Scatter side of the bucket sort. Each writer owns its own set of files
// (one per bucket, tagged with the writer id) so concurrent writers never
// share a handle. Records are buffered and appended in blocks.
//
// If the writer is destroyed without commit(), or any write fails, the
// files it created are removed.
class BucketWriter {
 public:
  BucketWriter(std::filesystem::path dir, std::size_t writer_id,
               std::size_t n_buckets);
  ~BucketWriter();

  BucketWriter(const BucketWriter&) = delete;
  BucketWriter& operator=(const BucketWriter&) = delete;

  void write(const PositionReport& r);
  void commit();

  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  void flush(std::size_t bucket);
  void discard() noexcept;

  std::filesystem::path dir_;
  std::size_t writer_id_;
  std::vector<std::string> pending_;
  std::vector<std::uint64_t> counts_;
  std::vector<bool> created_;
  bool committed_ = false;
};

std::filesystem::path bucket_file(const std::filesystem::path& dir,
                                  std::size_t bucket, std::size_t writer_id);

// All writers' files for one bucket, in name order.
std::vector<std::filesystem::path> bucket_files(const std::filesystem::path& dir,
                                                std::size_t bucket);

// Gather side: every record of one bucket, in unspecified order.
std::vector<PositionReport> read_bucket(const std::filesystem::path& dir,
                                        std::size_t bucket);

// Single-writer convenience over BucketWriter. Returns per-bucket counts.
std::vector<std::uint64_t> bucket_sort(std::span<const PositionReport> reports,
                                       std::size_t n_buckets,
                                       const std::filesystem::path& dir);

// Groups one bucket's reports into device-days. Each device gets a single
// offset, taken from its chronologically first report, and all of its
// reports are dated with it. Output is sorted by (device_id, local_date).
std::vector<DeviceDay> build_device_days(std::vector<PositionReport> reports);

}  // namespace mobility
