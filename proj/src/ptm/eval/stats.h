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

#ifndef PTM_EVAL_STATS_H_
#define PTM_EVAL_STATS_H_

#include <optional>
#include <vector>

#include "ptm/base/json.h"

namespace ptm {

double Mean(const std::vector<double> &x);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double SampleSd(const std::vector<double> &x);
double PopulationSd(const std::vector<double> &x);

struct TestResult {
  // Empty statistic marks an undefined result (bad input or zero variance
  // where no limit exists). An infinite t is reported as +/-inf with p = 0.
  std::optional<double> statistic;
  std::optional<double> p;
  int n = 0;
  int df = 0;
};

// Paired t over post - pre, two-sided p with n - 1 degrees of freedom.
// Zero variance of differences: t = 0, p = 1 when the mean difference is 0,
// otherwise t = +/-inf, p = 0.
TestResult PairedT(const std::vector<double> &pre, const std::vector<double> &post);

// Sample Pearson r with a two-sided p from t = r sqrt((n-2)/(1-r^2)).
// Undefined when n < 3 or either variance is zero.
TestResult PearsonR(const std::vector<double> &x, const std::vector<double> &y);

Json TestResultToJson(const TestResult &r, const char *statistic_name);

}  // namespace ptm

#endif  // PTM_EVAL_STATS_H_
