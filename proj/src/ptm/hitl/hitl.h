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

#ifndef PTM_HITL_HITL_H_
#define PTM_HITL_HITL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/graph/graph.h"
#include "ptm/llm/llm_client.h"

namespace ptm {

// Version tag of the clause-splitting heuristic below. Bump on any change so
// stored counts can be told apart.
inline constexpr std::string_view kTUnitHeuristic = "tunit-v1";

// Approximate count of minimal terminable units: the text is split into
// sentences on terminal punctuation, and each sentence is further split at
// ';' and at ", <and|but|or|so|yet|nor|for>" when the next word looks like a
// clause subject (a personal or demonstrative pronoun, determiner or
// possessive). Each non-empty piece counts once.
int CountTUnits(std::string_view text);

enum class ItemStatus { kPending, kAnswered, kSkipped, kFailed };
std::string_view ItemStatusName(ItemStatus s);
ItemStatus ParseItemStatus(std::string_view s);

struct FactCheckItem {
  std::string id;
  std::string node_id;
  Layer layer = Layer::kL1;
  std::string question;
  bool fallback_question = false;
  ItemStatus status = ItemStatus::kPending;
  std::string error;
};

struct FeedbackRecord {
  std::string item_id;
  std::string answer;
  int word_count = 0;
  int t_unit_count = 0;
  std::string submitted_at;
};

struct HitlSession {
  std::string user_id;
  uint64_t seed = 0;
  std::vector<FactCheckItem> items;
  std::vector<FeedbackRecord> feedback;
  int graph_version_pre = 0;
  int graph_version_post = 0;
  std::vector<std::string> warnings;

  FactCheckItem *Find(const std::string &item_id);
  const FactCheckItem *NextPending() const;
  bool Complete() const { return NextPending() == nullptr; }
};

// Items per layer (L1..L4), proportional to layer size. Leftover items go to
// the lowest layers first; no layer gets more items than it has nodes.
std::array<int, 4> AllocateItems(const std::array<size_t, 4> &layer_sizes, int n_items);

// First query of a QA call scoped to the node's content, or the fallback
// "Is it true that {title}? Please explain." when none comes back.
std::string GenerateQuestion(LlmClient &client, const PtmNode &node, bool *used_fallback = nullptr);

// Picks nodes by AllocateItems, samples within each layer, asks one
// question per node and shuffles the items, all seeded.
HitlSession OpenSession(const LayeredGraph &graph, LlmClient &client, int n_items, uint64_t seed);

// Builds the feedback record; counts come from the answer text.
FeedbackRecord MakeFeedback(const std::string &item_id, const std::string &answer,
                            const std::string &submitted_at);

// Refines one node through NR and returns the next snapshot, with a revision
// keyed by the feedback's item id. Throws kParse when the model never gives
// a usable reply; the graph is then unchanged.
LayeredGraph ApplyFeedback(const LayeredGraph &graph, LlmClient &client, const std::string &node_id,
                           const std::string &question, const FeedbackRecord &feedback);

// Records an answer on the session and refines the node. Returns the new
// snapshot, or the input graph when the refinement failed (item marked
// failed). Throws for unknown or already-closed items and empty answers.
LayeredGraph SubmitAnswer(HitlSession &session, const LayeredGraph &graph, LlmClient &client,
                          const std::string &item_id, const std::string &answer,
                          const std::string &submitted_at);

void SkipItem(HitlSession &session, const std::string &item_id);

Json SessionToJson(const HitlSession &session);
HitlSession SessionFromJson(const Json &j);
// {items, feedback_stats, version_pre, version_post}
Json SessionReport(const HitlSession &session);

// users/<uid>/hitl/session.json under the data root.
class HitlStore {
 public:
  explicit HitlStore(std::string root) : root_(std::move(root)) {}
  bool Has(const std::string &user_id) const;
  HitlSession Load(const std::string &user_id) const;  // kNotFound
  void Save(const HitlSession &session) const;

 private:
  std::string Path(const std::string &user_id) const;
  std::string root_;
};

}  // namespace ptm

#endif  // PTM_HITL_HITL_H_
