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

#include "ptm/eval/likert.h"

#include <filesystem>
#include <fstream>
#include <mutex>

#include "ptm/base/error.h"
#include "ptm/base/text.h"
#include "ptm/eval/stats.h"
#include "ptm/graph/store.h"

namespace ptm {

std::string_view ReviewPhaseName(ReviewPhase p) {
  return p == ReviewPhase::kPreHitl ? "pre_hitl" : "post_hitl";
}

ReviewPhase ParseReviewPhase(std::string_view s) {
  if (s == "pre_hitl" || s == "pre") return ReviewPhase::kPreHitl;
  if (s == "post_hitl" || s == "post") return ReviewPhase::kPostHitl;
  Fail(ErrorCode::kInvalidArgument, "unknown phase: " + std::string(s));
}

double NormalizeLikert(double mean) { return (mean - 1.0) / 4.0 * 100.0; }

LikertSummary SummarizeRatings(const std::vector<int> &ratings) {
  LikertSummary s;
  std::vector<double> x(ratings.begin(), ratings.end());
  s.n = static_cast<int>(x.size());
  if (x.empty()) return s;
  s.mean = Mean(x);
  s.sd = SampleSd(x);
  s.normalized_percent = NormalizeLikert(s.mean);
  return s;
}

namespace {

Json SummaryJson(const std::vector<int> &ratings) {
  LikertSummary s = SummarizeRatings(ratings);
  if (s.n == 0) return Json{{"n", 0}, {"mean", nullptr}, {"sd", nullptr}, {"normalized_percent", nullptr}};
  return Json{{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"normalized_percent", s.normalized_percent}};
}

}  // namespace

Json SummarizeLikert(const std::vector<LikertRecord> &records) {
  Json out = Json::object();
  for (ReviewPhase phase : {ReviewPhase::kPreHitl, ReviewPhase::kPostHitl}) {
    Json by = Json::object();
    std::vector<int> all;
    for (Layer layer : {Layer::kL1, Layer::kL2, Layer::kL3, Layer::kL4}) {
      std::vector<int> r;
      for (const auto &rec : records) {
        if (rec.phase == phase && rec.layer == layer) r.push_back(rec.rating);
      }
      all.insert(all.end(), r.begin(), r.end());
      by[std::string(LayerName(layer))] = SummaryJson(r);
    }
    by["all"] = SummaryJson(all);
    out[std::string(ReviewPhaseName(phase))] = by;
  }
  return out;
}

std::string LikertStore::Path(const std::string &user_id) const {
  ValidateUserId(user_id);
  return (std::filesystem::path(root_) / "users" / user_id / "likert.jsonl").string();
}

void LikertStore::Record(const LikertRecord &r) const {
  if (r.rating < 1 || r.rating > 5) {
    Fail(ErrorCode::kInvalidArgument, "rating must be 1..5, got " + std::to_string(r.rating));
  }
  if (r.node_id.empty()) Fail(ErrorCode::kInvalidArgument, "rating needs a node id");
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::string path = Path(r.user_id);
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream out(path, std::ios::app);
  out << Json{{"node_id", r.node_id},
              {"layer", LayerName(r.layer)},
              {"phase", ReviewPhaseName(r.phase)},
              {"rating", r.rating}}
             .dump()
      << "\n";
}

std::vector<LikertRecord> LikertStore::Load(const std::string &user_id) const {
  std::vector<LikertRecord> out;
  std::string path = Path(user_id);
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    Json j = ParseJsonOrDie(line, path);
    out.push_back(LikertRecord{user_id, j.at("node_id").get<std::string>(),
                               ParseLayer(j.at("layer").get<std::string>()),
                               ParseReviewPhase(j.at("phase").get<std::string>()),
                               j.at("rating").get<int>()});
  }
  return out;
}

}  // namespace ptm
