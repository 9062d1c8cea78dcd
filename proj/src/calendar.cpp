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

#include "mobility/calendar.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace mobility {

namespace {

namespace chr = std::chrono;

bool parse_digits(std::string_view s, int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

LocalDate LocalDate::from_epoch_seconds(std::int64_t seconds) noexcept {
  std::int64_t days = seconds / 86400;
  if (seconds % 86400 < 0) --days;
  return LocalDate(static_cast<std::int32_t>(days));
}

LocalDate LocalDate::from_ymd(int year, unsigned month, unsigned day) {
  const chr::sys_days d{chr::year{year} / chr::month{month} / chr::day{day}};
  return LocalDate(static_cast<std::int32_t>(d.time_since_epoch().count()));
}

std::optional<LocalDate> LocalDate::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (iso[i] < '0' || iso[i] > '9') return std::nullopt;
  }
  int y = 0, m = 0, d = 0;
  if (!parse_digits(iso.substr(0, 4), y) || !parse_digits(iso.substr(5, 2), m) ||
      !parse_digits(iso.substr(8, 2), d)) {
    return std::nullopt;
  }
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return LocalDate(static_cast<std::int32_t>(
      chr::sys_days{ymd}.time_since_epoch().count()));
}

std::string LocalDate::iso() const {
  const chr::year_month_day ymd{chr::sys_days{chr::days{days_}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

unsigned LocalDate::weekday() const noexcept {
  return chr::weekday{chr::sys_days{chr::days{days_}}}.c_encoding();
}

}  // namespace mobility
