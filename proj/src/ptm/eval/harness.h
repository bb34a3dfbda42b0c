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

#ifndef PTM_EVAL_HARNESS_H_
#define PTM_EVAL_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/eval/scores.h"
#include "ptm/graph/graph.h"
#include "ptm/ingest/journal.h"
#include "ptm/llm/llm_client.h"

namespace ptm {

struct QaItem {
  std::string id;
  std::string query;
  std::string ground_truth;
  Date window_start;
  Date window_end;
  std::optional<Layer> target_layer_hint;
};

Json QaItemToJson(const QaItem &item);
QaItem QaItemFromJson(const Json &j);

struct TestsetConfig {
  int window_days = 5;
  int num_windows = 2;
  // Upper bound on items kept per window; 0 keeps everything returned.
  int max_items_per_window = 0;
  uint64_t seed = 42;
};

// QA call over the entries dated inside [start, end]. Items are tagged with
// layer hints L1, L2, L3, L4, L1, ... in order. kFailedPrecondition when the
// window holds no entry.
std::vector<QaItem> GenerateTestsetWindow(LlmClient &client, const std::vector<JournalEntry> &entries,
                                          Date start, Date end, const std::string &id_prefix,
                                          int max_items = 0);

// Picks distinct window starts among entry dates (seeded) and generates a
// testset for each; ids are "w{k}-{n}".
std::vector<QaItem> GenerateTestset(LlmClient &client, const std::vector<JournalEntry> &entries,
                                    const TestsetConfig &config);

struct LabelSelection {
  std::vector<int> ids;
  std::vector<std::string> repairs;  // empty when the reply was usable as is
};

// LS call; the reply is repaired to exactly num_target unique in-range ids:
// invalid and repeated entries are dropped, extra ones truncated, and the
// remainder filled with the lowest unused indices.
LabelSelection SelectLabels(LlmClient &client, const std::string &query,
                            const std::vector<std::string> &labels, int num_target);
LabelSelection RepairLabelSelection(const Json &reply, size_t num_labels, int num_target);

struct PtmAnswer {
  std::string answer;
  std::vector<std::string> context_node_ids;
  std::vector<std::string> repairs;
};

// Label selection over every L1-L4 title, then the CA call with the chosen
// nodes' contents as context. The answer is returned verbatim.
PtmAnswer AnswerFromPtm(LlmClient &client, const LayeredGraph &graph, const std::string &query,
                        int num_target);

struct AtomicMatchReport {
  std::string item_id;
  Json true_positives = Json::array();
  Json false_negatives = Json::array();
  Json false_positives = Json::array();
  Counts counts;
};

// PE call. Counts are the lengths of the three lists.
AtomicMatchReport AtomicMatch(LlmClient &client, const std::string &query,
                              const std::string &prediction, const std::string &ground_truth);
AtomicMatchReport AtomicReportFromReply(const Json &reply);

enum class ItemOutcome { kEvaluated, kUnanswered, kUnevaluated };

struct ItemEvaluation {
  QaItem item;
  ItemOutcome outcome = ItemOutcome::kEvaluated;
  std::string prediction;
  std::vector<std::string> context_node_ids;
  AtomicMatchReport report;
  std::string error;
};

// Answers and scores every item against the graph.
std::vector<ItemEvaluation> EvaluateItems(LlmClient &client, const LayeredGraph &graph,
                                          const std::vector<QaItem> &items, int num_target);

Json ItemEvaluationToJson(const ItemEvaluation &e);

}  // namespace ptm

#endif  // PTM_EVAL_HARNESS_H_
