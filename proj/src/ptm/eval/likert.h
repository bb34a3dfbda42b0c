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

#ifndef PTM_EVAL_LIKERT_H_
#define PTM_EVAL_LIKERT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/graph/types.h"

namespace ptm {

enum class ReviewPhase { kPreHitl, kPostHitl };
std::string_view ReviewPhaseName(ReviewPhase p);  // "pre_hitl" / "post_hitl"
ReviewPhase ParseReviewPhase(std::string_view s);

struct LikertRecord {
  std::string user_id;
  std::string node_id;
  Layer layer = Layer::kL1;
  ReviewPhase phase = ReviewPhase::kPreHitl;
  int rating = 0;  // 1..5
};

struct LikertSummary {
  double mean = 0;
  double sd = 0;  // sample sd
  int n = 0;
  // (mean - 1) / 4 * 100: the scale's floor maps to 0%, its ceiling to 100%.
  double normalized_percent = 0;
};

double NormalizeLikert(double mean);
LikertSummary SummarizeRatings(const std::vector<int> &ratings);

// Summaries keyed by phase name and then layer name, plus "all".
Json SummarizeLikert(const std::vector<LikertRecord> &records);

// users/<uid>/likert.jsonl, append-only.
class LikertStore {
 public:
  explicit LikertStore(std::string root) : root_(std::move(root)) {}
  // Throws kInvalidArgument for ratings outside 1..5.
  void Record(const LikertRecord &record) const;
  std::vector<LikertRecord> Load(const std::string &user_id) const;

 private:
  std::string Path(const std::string &user_id) const;
  std::string root_;
};

}  // namespace ptm

#endif  // PTM_EVAL_LIKERT_H_
