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

#ifndef PTM_EVAL_SCORES_H_
#define PTM_EVAL_SCORES_H_

#include <optional>
#include <string>
#include <vector>

#include "ptm/base/json.h"

namespace ptm {

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  Counts &operator+=(const Counts &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 their harmonic mean; any
// 0/0 is defined as 0.
struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};
Prf ComputePrf(const Counts &c);

struct ScoreSummary {
  int n = 0;  // evaluated items
  Counts counts;
  std::optional<Prf> micro;  // empty when n == 0
  // F1 per group member (user) and its sample standard deviation.
  std::vector<double> member_f1;
  std::optional<double> sd;
};

// Micro-aggregates item counts. `member_counts` (one entry per user) feeds
// the per-member F1 list and its sd.
ScoreSummary Summarize(const std::vector<Counts> &items, const std::vector<Counts> &member_counts);

Json SummaryToJson(const ScoreSummary &s);

}  // namespace ptm

#endif  // PTM_EVAL_SCORES_H_
