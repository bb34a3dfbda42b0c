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

#include "ptm/base/dates.h"

#include <array>
#include <cctype>
#include <cstdio>
#include <regex>

#include "ptm/base/error.h"
#include "ptm/base/text.h"

namespace ptm {

namespace {

constexpr std::array<const char *, 7> kWeekdays = {
    "Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday",
    "Saturday"};

}  // namespace

Date::Date(std::chrono::year_month_day ymd)
    : days_(std::chrono::sys_days(ymd).time_since_epoch().count()) {}

std::optional<Date> Date::Parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  for (size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  }
  int y = std::stoi(std::string(text.substr(0, 4)));
  unsigned m = std::stoul(std::string(text.substr(5, 2)));
  unsigned d = std::stoul(std::string(text.substr(8, 2)));
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date(ymd);
}

Date Date::ParseOrDie(std::string_view text) {
  auto d = Parse(text);
  if (!d) Fail(ErrorCode::kInvalidArgument, "malformed date: " + std::string(text));
  return *d;
}

std::chrono::year_month_day Date::ymd() const {
  return std::chrono::year_month_day(
      std::chrono::sys_days(std::chrono::days(days_)));
}

std::string Date::ToString() const {
  auto v = ymd();
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(v.year()),
                static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
  return buf;
}

unsigned Date::weekday() const {
  return std::chrono::weekday(std::chrono::sys_days(std::chrono::days(days_)))
      .c_encoding();
}

std::string FormatClock(int minutes) {
  minutes = ((minutes % 1440) + 1440) % 1440;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

std::string TimeWindow::ToString() const {
  return FormatClock(start_minutes) + "-" + FormatClock(end_minutes);
}

std::optional<int> ParseClock(std::string_view hhmm) {
  static const std::regex kClock(R"(^\s*(\d{1,2}):(\d{2})\s*$)");
  std::string s(hhmm);
  std::smatch m;
  if (!std::regex_match(s, m, kClock)) return std::nullopt;
  int h = std::stoi(m[1]);
  int mm = std::stoi(m[2]);
  // 24:00 is accepted as end-of-day.
  if (h > 24 || mm > 59 || (h == 24 && mm != 0)) return std::nullopt;
  return h * 60 + mm;
}

WhenParse ParseWhen(std::string_view when) {
  WhenParse out;
  std::string lower = ToLower(when);
  for (const char *day : kWeekdays) {
    if (lower.find(ToLower(day)) != std::string::npos) {
      out.weekday = day;
      break;
    }
  }
  // Normalize the dash variants to '-'.
  std::string s(when);
  for (const std::string dash : {"\xE2\x80\x93", "\xE2\x80\x94", "--"}) {
    for (size_t pos = s.find(dash); pos != std::string::npos;
         pos = s.find(dash, pos)) {
      s.replace(pos, dash.size(), "-");
    }
  }
  static const std::regex kRange(
      R"((\d{1,2}:\d{2})\s*(?:-|to)\s*(\d{1,2}:\d{2}))");
  static const std::regex kStart(R"((\d{1,2}:\d{2}))");
  static const std::regex kHours(R"((\d+(?:\.\d+)?)\s*(?:h\b|hr|hour))");
  std::smatch m;
  if (std::regex_search(s, m, kRange)) {
    auto a = ParseClock(m[1].str());
    auto b = ParseClock(m[2].str());
    if (a && b) out.window = TimeWindow{*a, *b};
    return out;
  }
  if (std::regex_search(s, m, kStart)) {
    auto a = ParseClock(m[1].str());
    std::smatch hm;
    if (a && std::regex_search(s, hm, kHours)) {
      int dur = static_cast<int>(std::stod(hm[1].str()) * 60.0 + 0.5);
      out.window = TimeWindow{*a, (*a + dur) % 1440};
    }
  }
  return out;
}

}  // namespace ptm
