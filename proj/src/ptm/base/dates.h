// Copyright 2026 The PTM Authors.
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

#ifndef PTM_BASE_DATES_H_
#define PTM_BASE_DATES_H_

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace ptm {

// Calendar date without time zone. Stored as days since epoch so that
// comparison and hashing are trivial.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::year_month_day ymd);

  // Accepts exactly "YYYY-MM-DD". Returns nullopt on malformed or invalid
  // dates (e.g. 2025-02-30).
  static std::optional<Date> Parse(std::string_view text);
  // Throws ptm::Error(kInvalidArgument) on failure.
  static Date ParseOrDie(std::string_view text);

  std::string ToString() const;
  std::chrono::year_month_day ymd() const;
  int days() const { return days_; }
  // 0 = Sunday ... 6 = Saturday.
  unsigned weekday() const;

  auto operator<=>(const Date &) const = default;
  Date operator+(int days) const {
    Date d;
    d.days_ = days_ + days;
    return d;
  }
  int operator-(const Date &other) const { return days_ - other.days_; }

 private:
  int days_ = 0;
};

// A clock window inside one day, in minutes after midnight. The end may be
// smaller than the start for windows that cross midnight.
struct TimeWindow {
  int start_minutes = 0;
  int end_minutes = 0;

  bool operator==(const TimeWindow &) const = default;
  std::string ToString() const;  // "HH:MM-HH:MM"
};

// Result of parsing a WHEN value in the "Day, HH:MM-HH:MM" form.
struct WhenParse {
  std::optional<std::string> weekday;   // canonical English day name
  std::optional<TimeWindow> window;
};

// Parses the WHEN format requested by the extraction prompt. Tolerates
// en-dashes, missing comma, and a lone start time ("Friday, 10:00"). Any part
// that cannot be read is left empty; the raw text is kept by the caller.
WhenParse ParseWhen(std::string_view when);

std::optional<int> ParseClock(std::string_view hhmm);
std::string FormatClock(int minutes);

}  // namespace ptm

#endif  // PTM_BASE_DATES_H_
