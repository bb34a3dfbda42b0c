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

#include "ptm/eval/scores.h"

#include "ptm/eval/stats.h"

namespace ptm {

Prf ComputePrf(const Counts &c) {
  Prf out;
  if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (out.precision + out.recall > 0) {
    out.f1 = 2 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

ScoreSummary Summarize(const std::vector<Counts> &items, const std::vector<Counts> &member_counts) {
  ScoreSummary s;
  s.n = static_cast<int>(items.size());
  for (const auto &c : items) s.counts += c;
  if (s.n > 0) s.micro = ComputePrf(s.counts);
  for (const auto &c : member_counts) s.member_f1.push_back(ComputePrf(c).f1);
  if (s.member_f1.size() >= 2) s.sd = SampleSd(s.member_f1);
  return s;
}

Json SummaryToJson(const ScoreSummary &s) {
  Json j{{"n", s.n}, {"tp", s.counts.tp}, {"fp", s.counts.fp}, {"fn", s.counts.fn}};
  if (s.micro) {
    j["precision"] = s.micro->precision;
    j["recall"] = s.micro->recall;
    j["f1"] = s.micro->f1;
  } else {
    j["precision"] = j["recall"] = j["f1"] = nullptr;
  }
  j["sd"] = s.sd ? Json(*s.sd) : Json(nullptr);
  j["member_f1"] = s.member_f1;
  return j;
}

}  // namespace ptm
