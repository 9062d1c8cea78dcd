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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mobility {

// A proleptic Gregorian calendar date, stored as days since 1970-01-01.
class LocalDate {
 public:
  constexpr LocalDate() = default;
  constexpr explicit LocalDate(std::int32_t days_since_epoch)
      : days_(days_since_epoch) {}

  // Date containing the given instant, after it has been shifted into local
  // time. Uses floor division, so negative instants land on the prior day.
  static LocalDate from_epoch_seconds(std::int64_t seconds) noexcept;

  static LocalDate from_ymd(int year, unsigned month, unsigned day);

  // Parses strict yyyy-mm-dd. Returns nullopt for anything else, including
  // impossible dates such as 2020-02-30.
  static std::optional<LocalDate> parse(std::string_view iso);

  constexpr std::int32_t days_since_epoch() const noexcept { return days_; }

  // Seconds since the epoch at 00:00 of this date.
  constexpr std::int64_t start_seconds() const noexcept {
    return static_cast<std::int64_t>(days_) * 86400;
  }

  std::string iso() const;

  // 0 = Sunday ... 6 = Saturday.
  unsigned weekday() const noexcept;
  bool is_weekday() const noexcept {
    const unsigned wd = weekday();
    return wd >= 1 && wd <= 5;
  }

  constexpr LocalDate operator+(std::int32_t days) const noexcept {
    return LocalDate(days_ + days);
  }

  friend constexpr auto operator<=>(LocalDate, LocalDate) = default;

 private:
  std::int32_t days_ = 0;
};

}  // namespace mobility
