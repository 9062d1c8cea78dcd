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

#include "mobility/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>
#include <zlib.h>

#include "mobility/error.hpp"

namespace mobility {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kKmPerDegLat = 111.195;

double round_to(double v, double quantum) { return std::round(v / quantum) * quantum; }

// Fold a longitude into [-180, 180).
double wrap_lon(double lon) {
  while (lon >= 180.0) lon -= 360.0;
  while (lon < -180.0) lon += 360.0;
  return lon;
}

std::string hex_id(Rng& rng, int chars) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  std::uint64_t bits = rng.next();
  for (int i = 0; i < chars; ++i) {
    s += kHex[bits & 0xF];
    bits >>= 4;
  }
  return s;
}

// Formats a report the way a vendor feed would and returns the values the
// ingest side will parse back, so truth is computed from identical doubles.
struct Line {
  std::string text;
  PositionReport parsed;
};

Line make_line(const std::string& device, std::int64_t epoch, double lat,
               double lon, double acc) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%lld,%.6f,%.6f,%.1f", device.c_str(),
                static_cast<long long>(epoch), lat, lon, acc);
  Line line;
  line.text = buf;
  // Re-read the printed digits.
  char lat_s[40], lon_s[40], acc_s[40];
  std::snprintf(lat_s, sizeof lat_s, "%.6f", lat);
  std::snprintf(lon_s, sizeof lon_s, "%.6f", lon);
  std::snprintf(acc_s, sizeof acc_s, "%.1f", acc);
  line.parsed.device_id = device;
  line.parsed.epoch_s = epoch;
  line.parsed.point = {std::strtod(lat_s, nullptr), std::strtod(lon_s, nullptr)};
  if (line.parsed.point.lon == 180.0) line.parsed.point.lon = -180.0;
  line.parsed.accuracy_m = std::strtod(acc_s, nullptr);
  return line;
}

// Moves a point by (north_km, east_km) on a locally flat Earth.
void displace(double& lat, double& lon, double north_km, double east_km) {
  lat += north_km / kKmPerDegLat;
  lon += east_km / (kKmPerDegLat * std::cos(lat * kTwoPi / 360.0));
}

class ShardSink {
 public:
  ShardSink(const fs::path& path, bool gzip) : path_(path), gzip_(gzip) {
    if (gzip_) {
      gz_ = gzopen(path.c_str(), "wb6");
      if (gz_ == nullptr) throw io_error("cannot create '" + path.string() + "'");
    } else {
      file_ = std::fopen(path.c_str(), "wb");
      if (file_ == nullptr) throw io_error("cannot create '" + path.string() + "'");
    }
  }
  ~ShardSink() { close(); }

  void write_line(const std::string& s) {
    buffer_ += s;
    buffer_ += '\n';
    if (buffer_.size() > (1 << 16)) flush();
  }

  void close() {
    if (gz_ == nullptr && file_ == nullptr) return;
    flush();
    if (gz_ != nullptr) {
      gzclose(gz_);
      gz_ = nullptr;
    }
    if (file_ != nullptr) {
      std::fclose(file_);
      file_ = nullptr;
    }
  }

 private:
  void flush() {
    if (buffer_.empty()) return;
    bool ok = false;
    if (gz_ != nullptr) {
      ok = gzwrite(gz_, buffer_.data(), static_cast<unsigned>(buffer_.size())) ==
           static_cast<int>(buffer_.size());
    } else {
      ok = std::fwrite(buffer_.data(), 1, buffer_.size(), file_) == buffer_.size();
    }
    if (!ok) throw io_error("write failed on '" + path_.string() + "'");
    buffer_.clear();
  }

  fs::path path_;
  bool gzip_;
  gzFile gz_ = nullptr;
  std::FILE* file_ = nullptr;
  std::string buffer_;
};

struct ToyRegion {
  const char* admin1;
  const char* admin2;
  const char* region_id;
  const char* place;
  double lon0, lat0, lon1, lat1;  // relative to the centre
};

// Two admin1 regions side by side, each cut into a southern and a northern
// admin2 half.
constexpr ToyRegion kToyRegions[] = {
    {"Northfield", "", "90", nullptr, -1.0, -0.5, 0.0, 0.5},
    {"Northfield", "Ash County", "90001", "Ashton", -1.0, -0.5, 0.0, 0.0},
    {"Northfield", "Birch County", "90002", "Birchport", -1.0, 0.0, 0.0, 0.5},
    {"Southport, East", "", "91", nullptr, 0.0, -0.5, 1.0, 0.5},
    {"Southport, East", "Cedar County", "91001", "Cedar Falls", 0.0, -0.5, 1.0, 0.0},
    {"Southport, East", "Dogwood County", "91002", "Dogwood", 0.0, 0.0, 1.0, 0.5},
};

// Indices of the admin2 entries in kToyRegions.
constexpr int kToyCounties[] = {1, 2, 4, 5};

}  // namespace

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = 0;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

const char* to_string(DeviceDayShape shape) noexcept {
  switch (shape) {
    case DeviceDayShape::scatter:
      return "scatter";
    case DeviceDayShape::duplicates:
      return "duplicates";
    case DeviceDayShape::collinear:
      return "collinear";
    case DeviceDayShape::antimeridian:
      return "antimeridian";
    case DeviceDayShape::sparse:
      return "sparse";
    case DeviceDayShape::short_span:
      return "short_span";
    case DeviceDayShape::exact_threshold:
      return "exact_threshold";
  }
  return "unknown";
}

std::vector<PositionReport> random_device_day(Rng& rng, DeviceDayShape shape,
                                              const std::string& device_id) {
  std::size_t n = static_cast<std::size_t>(rng.uniform_int(10, 60));
  double span_h = rng.uniform(8.0, 18.0);
  if (shape == DeviceDayShape::sparse) n = static_cast<std::size_t>(rng.uniform_int(1, 9));
  if (shape == DeviceDayShape::short_span) span_h = rng.uniform(0.5, 7.99);
  if (shape == DeviceDayShape::exact_threshold) {
    n = 10;
    span_h = 8.0;
  }

  // Positions.
  std::vector<GeoPoint> pts;
  const double c_lat = round_to(rng.uniform(-60.0, 60.0), 1e-6);
  const double c_lon = round_to(rng.uniform(-170.0, 170.0), 1e-6);
  const double radius = std::pow(10.0, rng.uniform(-4.0, -0.5));  // degrees
  switch (shape) {
    case DeviceDayShape::duplicates: {
      const std::size_t distinct = static_cast<std::size_t>(rng.uniform_int(1, 4));
      std::vector<GeoPoint> base;
      for (std::size_t i = 0; i < distinct; ++i) {
        base.push_back({round_to(c_lat + rng.uniform(-radius, radius), 1e-6),
                        round_to(c_lon + rng.uniform(-radius, radius), 1e-6)});
      }
      for (std::size_t i = 0; i < n; ++i) pts.push_back(base[rng.below(distinct)]);
      break;
    }
    case DeviceDayShape::collinear: {
      // Dyadic coordinates keep every orientation test exact.
      const double step = std::ldexp(1.0, -static_cast<int>(rng.uniform_int(8, 16)));
      const double slope = static_cast<double>(rng.uniform_int(-2, 2));
      const bool vertical = rng.bernoulli(0.2);
      const double b_lat = std::ldexp(std::round(std::ldexp(c_lat, 10)), -10);
      const double b_lon = std::ldexp(std::round(std::ldexp(c_lon, 10)), -10);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(rng.uniform_int(-20, 20)) * step;
        pts.push_back(vertical ? GeoPoint{b_lat + t, b_lon}
                               : GeoPoint{b_lat + slope * t, b_lon + t});
      }
      break;
    }
    case DeviceDayShape::antimeridian: {
      const double lat = round_to(rng.uniform(-60.0, 60.0), 1e-6);
      const double base = rng.bernoulli(0.5) ? 179.95 : -179.95;
      for (std::size_t i = 0; i < n; ++i) {
        const double lon = wrap_lon(base + rng.uniform(-0.1, 0.1));
        pts.push_back({round_to(lat + rng.uniform(-0.05, 0.05), 1e-6),
                       std::max(-180.0, std::min(179.999999, round_to(lon, 1e-6)))});
      }
      break;
    }
    default:
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({round_to(c_lat + rng.uniform(-radius, radius), 1e-6),
                       round_to(c_lon + rng.uniform(-radius, radius), 1e-6)});
      }
  }

  // Times: the first fix is strictly earliest so it alone fixes the offset.
  const int offset = oracle_solar_offset(pts[0].lon);
  const auto day = static_cast<std::int64_t>(rng.uniform_int(18262, 18627));  // 2020
  const std::int64_t span_s = static_cast<std::int64_t>(std::llround(span_h * 3600.0));
  const std::int64_t latest_start = 86400 - 1 - span_s;
  const std::int64_t start_local = rng.uniform_int(1, std::max<std::int64_t>(1, latest_start));
  const std::int64_t t0 = day * 86400 + start_local - std::int64_t{3600} * offset;
  std::vector<std::int64_t> times{t0};
  if (n > 1) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      times.push_back(t0 + 1 + rng.uniform_int(0, std::max<std::int64_t>(0, span_s - 1)));
    }
    times.push_back(t0 + span_s);
    std::sort(times.begin() + 1, times.end());
  }

  std::vector<PositionReport> out;
  for (std::size_t i = 0; i < n; ++i) {
    PositionReport r;
    r.device_id = device_id;
    r.epoch_s = times[i];
    r.point = pts[i];
    r.accuracy_m = round_to(rng.uniform(1.0, 50.0), 0.1);
    out.push_back(std::move(r));
  }
  if (shape == DeviceDayShape::duplicates && n > 2) {
    // Exact copies of whole reports are kept by the pipeline.
    out.push_back(out[1 + rng.below(n - 1)]);
  }
  // Hand them over in arbitrary order.
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.below(i)]);
  return out;
}

double ScenarioSpec::scale_on(LocalDate date) const {
  if (auto it = scale_overrides.find(date); it != scale_overrides.end()) return it->second;
  return date < change_date ? 1.0 : post_change_scale;
}

void ScenarioSpec::validate() const {
  if (devices == 0) throw config_error("devices must be positive");
  if (end < start) throw config_error("scenario end precedes start");
  if (!(post_change_scale > 0.0)) throw config_error("scale factors must be > 0");
  for (const auto& [date, scale] : scale_overrides) {
    if (!(scale > 0.0)) throw config_error("scale factor for " + date.iso() + " must be > 0");
  }
  if (min_reports_per_day < 1 || max_reports_per_day < min_reports_per_day) {
    throw config_error("invalid reports-per-day range");
  }
  if (shards == 0) throw config_error("shards must be positive");
  for (double f : {short_span_fraction, missing_day_fraction, inaccurate_fraction,
                   unmatched_fraction}) {
    if (f < 0.0 || f > 1.0) throw config_error("fractions must lie in [0, 1]");
  }
  if (malformed_fraction < 0.0) throw config_error("malformed fraction must be >= 0");
}

std::string toy_gazetteer_ndjson(double center_lat, double center_lon) {
  std::string out;
  for (const ToyRegion& r : kToyRegions) {
    const double x0 = center_lon + r.lon0, x1 = center_lon + r.lon1;
    const double y0 = center_lat + r.lat0, y1 = center_lat + r.lat1;
    json rec = json::object();
    rec["type"] = "region";
    rec["country_code"] = "US";
    rec["admin1"] = r.admin1;
    rec["admin2"] = r.admin2;
    rec["region_id"] = r.region_id;
    rec["utc_offset_hours"] = oracle_solar_offset(center_lon);
    rec["polygons"] = json::array({json::array({json::array({x0, y0}), json::array({x1, y0}),
                                                json::array({x1, y1}), json::array({x0, y1}),
                                                json::array({x0, y0})})});
    out += rec.dump();
    out += '\n';
  }
  for (const ToyRegion& r : kToyRegions) {
    if (r.place == nullptr) continue;
    json rec = json::object();
    rec["type"] = "place";
    rec["name"] = r.place;
    rec["lat"] = center_lat + (r.lat0 + r.lat1) / 2;
    rec["lon"] = center_lon + (r.lon0 + r.lon1) / 2;
    rec["region_id"] = r.region_id;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

GeneratedScenario generate(const ScenarioSpec& spec, const fs::path& dir) {
  spec.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create '" + dir.string() + "'");

  GeneratedScenario result;
  Rng rng(spec.seed);

  result.gazetteer = dir / "gazetteer.ndjson";
  {
    std::ofstream g(result.gazetteer, std::ios::binary);
    if (!g) throw io_error("cannot create '" + result.gazetteer.string() + "'");
    g << toy_gazetteer_ndjson(spec.center_lat, spec.center_lon);
  }

  std::vector<std::unique_ptr<ShardSink>> sinks;
  for (std::size_t s = 0; s < spec.shards; ++s) {
    char name[32];
    std::snprintf(name, sizeof name, "shard-%03zu.csv%s", s, spec.gzip ? ".gz" : "");
    result.shards.push_back(dir / name);
    sinks.push_back(std::make_unique<ShardSink>(result.shards.back(), spec.gzip));
    sinks.back()->write_line("device_id,epoch_s,lat,lon,accuracy_m");
  }

  struct Device {
    std::string id;
    double home_lat, home_lon;
    double distance_km;
    int offset;
    std::string region_id;
    std::vector<PositionReport> accepted;
  };
  std::vector<Device> devices;
  for (std::size_t d = 0; d < spec.devices; ++d) {
    Device dev;
    dev.id = hex_id(rng, 12);
    if (rng.bernoulli(spec.unmatched_fraction)) {
      // Well north of every toy region.
      dev.home_lat = spec.center_lat + rng.uniform(1.5, 2.5);
      dev.home_lon = spec.center_lon + rng.uniform(-1.0, 1.0);
    } else {
      const ToyRegion& r = kToyRegions[kToyCounties[rng.below(4)]];
      dev.home_lat = spec.center_lat + rng.uniform(r.lat0 + 0.05, r.lat1 - 0.05);
      dev.home_lon = spec.center_lon + rng.uniform(r.lon0 + 0.1, r.lon1 - 0.1);
      dev.region_id = r.region_id;
    }
    dev.home_lat = round_to(dev.home_lat, 1e-6);
    dev.home_lon = round_to(dev.home_lon, 1e-6);
    dev.distance_km = spec.median_distance_km * std::exp(spec.distance_sigma * rng.normal());
    dev.offset = oracle_solar_offset(dev.home_lon);
    devices.push_back(std::move(dev));
  }

  static const char* const kGarbage[] = {
      "garbage", "x,notanumber,1.0,2.0,3.0", "x,1584316800,95.0,0.0,1.0",
      "x,1584316800,1.0,2.0", "x,1584316800,1.0,2.0,-4.0", ",1584316800,1.0,2.0,3.0"};

  for (LocalDate date = spec.start; date <= spec.end; date = date + 1) {
    const double scale = spec.scale_on(date);
    for (Device& dev : devices) {
      if (rng.bernoulli(spec.missing_day_fraction)) continue;
      const auto n = static_cast<std::size_t>(
          rng.uniform_int(spec.min_reports_per_day, spec.max_reports_per_day));
      const double span_h = rng.bernoulli(spec.short_span_fraction) ? rng.uniform(2.0, 7.5)
                                                                      : rng.uniform(8.5, 14.0);
      const double start_h = rng.uniform(0.5, 23.5 - span_h);
      const double dist = dev.distance_km * scale *
                          (1.0 + spec.daily_jitter * rng.uniform(-1.0, 1.0));
      const double bearing = rng.uniform(0.0, kTwoPi);
      const double jitter_km = 0.02 * dist;
      double dest_lat = dev.home_lat, dest_lon = dev.home_lon;
      displace(dest_lat, dest_lon, dist * std::cos(bearing), dist * std::sin(bearing));

      const std::int64_t midnight = date.start_seconds() - std::int64_t{3600} * dev.offset;
      const std::int64_t t_start = midnight + std::llround(start_h * 3600.0);
      const std::int64_t span_s = std::llround(span_h * 3600.0);

      for (std::size_t i = 0; i < n; ++i) {
        const double phase = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        const std::int64_t t = t_start + std::llround(phase * static_cast<double>(span_s));
        double lat = dev.home_lat, lon = dev.home_lon;
        if (i != 0) {
          if (phase >= 0.3 && phase <= 0.7) {
            lat = dest_lat;
            lon = dest_lon;
          }
          const double jr = jitter_km * rng.uniform();
          const double jb = rng.uniform(0.0, kTwoPi);
          displace(lat, lon, jr * std::cos(jb), jr * std::sin(jb));
        }
        double acc = round_to(rng.uniform(3.0, 48.0), 0.1);
        if (i != 0 && rng.bernoulli(spec.inaccurate_fraction)) {
          acc = round_to(rng.uniform(50.1, 300.0), 0.1);
        } else if (rng.bernoulli(0.01)) {
          acc = 50.0;
        }
        const Line line = make_line(dev.id, t, lat, wrap_lon(lon), acc);
        ShardSink& sink = *sinks[rng.below(spec.shards)];
        sink.write_line(line.text);
        ++result.data_lines;
        if (line.parsed.accuracy_m <= 50.0) {
          ++result.accepted;
          if (spec.write_truth) dev.accepted.push_back(line.parsed);
        } else {
          ++result.rejected_accuracy;
        }
        if (spec.malformed_fraction > 0.0 && rng.bernoulli(spec.malformed_fraction)) {
          sink.write_line(kGarbage[rng.below(std::size(kGarbage))]);
          ++result.data_lines;
          ++result.malformed_lines;
        }
      }
    }
  }
  for (auto& sink : sinks) sink->close();

  if (!spec.write_truth) return result;

  // Truth: the oracle's own grouping into device-days, then oracle metrics.
  result.truth = dir / "truth.ndjson";
  std::ofstream truth(result.truth, std::ios::binary);
  if (!truth) throw io_error("cannot create '" + result.truth.string() + "'");
  std::sort(devices.begin(), devices.end(),
            [](const Device& a, const Device& b) { return a.id < b.id; });
  for (Device& dev : devices) {
    if (dev.accepted.empty()) continue;
    std::sort(dev.accepted.begin(), dev.accepted.end(),
              [](const PositionReport& a, const PositionReport& b) {
                if (a.epoch_s != b.epoch_s) return a.epoch_s < b.epoch_s;
                if (a.point.lat != b.point.lat) return a.point.lat < b.point.lat;
                if (a.point.lon != b.point.lon) return a.point.lon < b.point.lon;
                return a.accuracy_m < b.accuracy_m;
              });
    const int offset = oracle_solar_offset(dev.accepted.front().point.lon);
    std::map<std::int64_t, std::vector<PositionReport>> days;
    for (const auto& r : dev.accepted) {
      const std::int64_t local = r.epoch_s + std::int64_t{3600} * offset;
      const std::int64_t day = local >= 0 ? local / 86400 : -((-local + 86399) / 86400);
      days[day].push_back(r);
    }
    for (auto& [day, reports] : days) {
      const std::size_t count = reports.size();
      const OracleResult res = oracle_metrics(std::move(reports));
      json rec = json::object();
      rec["device_id"] = dev.id;
      rec["local_date"] = LocalDate(static_cast<std::int32_t>(day)).iso();
      rec["tz_offset_hours"] = offset;
      rec["report_count"] = count;
      rec["home_region_id"] = dev.region_id;
      rec["verdict"] = to_string(res.verdict);
      if (res.metrics) {
        const MobilityMetrics& m = *res.metrics;
        rec["m_max"] = m.m_max;
        rec["m_bb"] = m.m_bb;
        rec["m_ch"] = m.m_ch;
        rec["a_bb"] = m.a_bb.value();
        rec["a_ch"] = m.a_ch.value();
        rec["span_hours"] = m.span_hours;
        rec["canonical_lat"] = m.canonical_point.lat;
        rec["canonical_lon"] = m.canonical_point.lon;
      }
      truth << rec.dump() << '\n';
      ++result.truth_device_days;
    }
  }
  if (!truth) throw io_error("write failed on '" + result.truth.string() + "'");
  return result;
}

}  // namespace mobility
