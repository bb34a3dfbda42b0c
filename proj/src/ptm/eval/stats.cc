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

#include "ptm/eval/stats.h"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

namespace ptm {

namespace {

double TwoSidedP(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

}  // namespace

double Mean(const std::vector<double> &x) {
  if (x.empty()) return 0;
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double SampleSd(const std::vector<double> &x) {
  if (x.size() < 2) return 0;
  double m = Mean(x), s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

double PopulationSd(const std::vector<double> &x) {
  if (x.empty()) return 0;
  double m = Mean(x), s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

TestResult PairedT(const std::vector<double> &pre, const std::vector<double> &post) {
  TestResult r;
  r.n = static_cast<int>(pre.size());
  if (pre.size() != post.size() || pre.size() < 2) return r;
  r.df = r.n - 1;
  std::vector<double> d;
  for (size_t i = 0; i < pre.size(); ++i) d.push_back(post[i] - pre[i]);
  double m = Mean(d), sd = SampleSd(d);
  if (sd == 0) {
    if (m == 0) {
      r.statistic = 0.0;
      r.p = 1.0;
    } else {
      r.statistic = m > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    return r;
  }
  double t = m / (sd / std::sqrt(static_cast<double>(d.size())));
  r.statistic = t;
  r.p = TwoSidedP(t, r.df);
  return r;
}

TestResult PearsonR(const std::vector<double> &x, const std::vector<double> &y) {
  TestResult r;
  r.n = static_cast<int>(x.size());
  if (x.size() != y.size() || x.size() < 3) return r;
  r.df = r.n - 2;
  double mx = Mean(x), my = Mean(y), sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return r;
  double rho = sxy / std::sqrt(sxx * syy);
  rho = std::max(-1.0, std::min(1.0, rho));
  r.statistic = rho;
  if (std::fabs(rho) >= 1.0) {
    r.p = 0.0;
  } else {
    double t = rho * std::sqrt(r.df / (1 - rho * rho));
    r.p = TwoSidedP(t, r.df);
  }
  return r;
}

Json TestResultToJson(const TestResult &r, const char *statistic_name) {
  Json j{{"n", r.n}, {"df", r.df}};
  if (!r.statistic) {
    j[statistic_name] = nullptr;
    j["p"] = nullptr;
    j["defined"] = false;
    return j;
  }
  if (std::isinf(*r.statistic)) {
    j[statistic_name] = *r.statistic > 0 ? "inf" : "-inf";
  } else {
    j[statistic_name] = *r.statistic;
  }
  j["p"] = *r.p;
  j["defined"] = true;
  return j;
}

}  // namespace ptm
