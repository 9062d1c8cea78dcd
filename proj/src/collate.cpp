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

#include "mobility/collate.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <tuple>

#include "mobility/error.hpp"
#include "mobility/line_reader.hpp"

namespace mobility {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kFlushBytes = 1 << 16;

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

template <typename Int>
void append_int(std::string& out, Int v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

LocalDate local_date_for(std::int64_t epoch_s, int tz_offset_hours) noexcept {
  return LocalDate::from_epoch_seconds(epoch_s +
                                       std::int64_t{3600} * tz_offset_hours);
}

DayAssignment assign_local_day(const PositionReport& r) noexcept {
  const int offset = solar_tz_offset_hours(r.point.lon);
  return {r.device_id, local_date_for(r.epoch_s, offset), offset};
}

bool report_order(const PositionReport& a, const PositionReport& b) noexcept {
  return std::tie(a.epoch_s, a.point.lat, a.point.lon, a.accuracy_m) <
         std::tie(b.epoch_s, b.point.lat, b.point.lon, b.accuracy_m);
}

std::string format_spill_line(const PositionReport& r, int tz_offset_hours) {
  std::string out;
  out.reserve(r.device_id.size() + 64);
  out += r.device_id;
  out += ',';
  append_int(out, r.epoch_s);
  out += ',';
  append_double(out, r.point.lat);
  out += ',';
  append_double(out, r.point.lon);
  out += ',';
  append_double(out, r.accuracy_m);
  out += ',';
  append_int(out, tz_offset_hours);
  return out;
}

std::optional<SpillRecord> parse_spill_line(std::string_view line) {
  const std::size_t comma = line.rfind(',');
  if (comma == std::string_view::npos) return std::nullopt;
  SpillRecord rec;
  const std::string_view tz = line.substr(comma + 1);
  auto [ptr, ec] = std::from_chars(tz.data(), tz.data() + tz.size(),
                                   rec.tz_offset_hours);
  if (ec != std::errc() || ptr != tz.data() + tz.size()) return std::nullopt;
  ParsedLine parsed = parse_report_line(line.substr(0, comma));
  auto* report = std::get_if<PositionReport>(&parsed);
  if (report == nullptr) return std::nullopt;
  rec.report = std::move(*report);
  return rec;
}

std::uint64_t device_hash(std::string_view device_id) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : device_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

fs::path bucket_file(const fs::path& dir, std::size_t bucket,
                     std::size_t writer_id) {
  char name[64];
  std::snprintf(name, sizeof name, "b%05zu-w%03zu.csv", bucket, writer_id);
  return dir / name;
}

BucketWriter::BucketWriter(fs::path dir, std::size_t writer_id,
                           std::size_t n_buckets)
    : dir_(std::move(dir)),
      writer_id_(writer_id),
      pending_(n_buckets),
      counts_(n_buckets, 0),
      created_(n_buckets, false) {
  if (n_buckets == 0) throw config_error("n-buckets must be at least 1");
}

BucketWriter::~BucketWriter() {
  if (!committed_) discard();
}

void BucketWriter::write(const PositionReport& r) {
  const std::size_t b = bucket_of(r.device_id, pending_.size());
  std::string& buf = pending_[b];
  buf += format_spill_line(r, solar_tz_offset_hours(r.point.lon));
  buf += '\n';
  ++counts_[b];
  if (buf.size() >= kFlushBytes) flush(b);
}

void BucketWriter::flush(std::size_t bucket) {
  std::string& buf = pending_[bucket];
  if (buf.empty()) return;
  const fs::path path = bucket_file(dir_, bucket, writer_id_);
  std::FILE* f = std::fopen(path.c_str(), created_[bucket] ? "ab" : "wb");
  if (f == nullptr) {
    discard();
    throw io_error("cannot write spill file '" + path.string() + "'");
  }
  created_[bucket] = true;
  const bool ok = std::fwrite(buf.data(), 1, buf.size(), f) == buf.size();
  const bool closed = std::fclose(f) == 0;
  if (!ok || !closed) {
    discard();
    throw io_error("write failed on spill file '" + path.string() + "'");
  }
  buf.clear();
}

void BucketWriter::commit() {
  for (std::size_t b = 0; b < pending_.size(); ++b) flush(b);
  committed_ = true;
}

void BucketWriter::discard() noexcept {
  for (std::size_t b = 0; b < created_.size(); ++b) {
    if (!created_[b]) continue;
    std::error_code ec;
    fs::remove(bucket_file(dir_, b, writer_id_), ec);
    created_[b] = false;
  }
  for (auto& p : pending_) p.clear();
}

std::vector<fs::path> bucket_files(const fs::path& dir, std::size_t bucket) {
  char prefix[16];
  std::snprintf(prefix, sizeof prefix, "b%05zu-", bucket);
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0) out.push_back(entry.path());
  }
  if (ec) throw io_error("cannot list spill directory '" + dir.string() + "'");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PositionReport> read_bucket(const fs::path& dir, std::size_t bucket) {
  std::vector<PositionReport> out;
  for (const fs::path& path : bucket_files(dir, bucket)) {
    LineReader lines(path);
    std::string_view line;
    while (lines.next(line)) {
      auto rec = parse_spill_line(line);
      if (!rec) {
        throw data_error("corrupt spill record in '" + path.string() + "'");
      }
      out.push_back(std::move(rec->report));
    }
  }
  return out;
}

std::vector<std::uint64_t> bucket_sort(std::span<const PositionReport> reports,
                                       std::size_t n_buckets,
                                       const fs::path& dir) {
  BucketWriter writer(dir, 0, n_buckets);
  for (const PositionReport& r : reports) writer.write(r);
  writer.commit();
  return writer.counts();
}

std::vector<DeviceDay> build_device_days(std::vector<PositionReport> reports) {
  std::sort(reports.begin(), reports.end(),
            [](const PositionReport& a, const PositionReport& b) {
              if (a.device_id != b.device_id) return a.device_id < b.device_id;
              return report_order(a, b);
            });

  std::vector<DeviceDay> out;
  std::size_t i = 0;
  while (i < reports.size()) {
    std::size_t j = i;
    while (j < reports.size() && reports[j].device_id == reports[i].device_id) ++j;

    // Reports are time-sorted within the device, so [i] is its first fix.
    const int offset = solar_tz_offset_hours(reports[i].point.lon);
    for (std::size_t k = i; k < j; ++k) {
      const LocalDate date = local_date_for(reports[k].epoch_s, offset);
      if (out.empty() || out.back().device_id != reports[k].device_id ||
          out.back().local_date != date) {
        out.push_back({reports[k].device_id, date, offset, {}});
      }
      out.back().reports.push_back(std::move(reports[k]));
    }
    i = j;
  }
  return out;
}

}  // namespace mobility
