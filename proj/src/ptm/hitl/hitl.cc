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

#include "ptm/hitl/hitl.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <regex>

#include "ptm/base/error.h"
#include "ptm/base/parallel.h"
#include "ptm/base/random.h"
#include "ptm/base/text.h"
#include "ptm/graph/store.h"

namespace ptm {

namespace {

const std::regex &ClauseJoin() {
  static const std::regex re(
      R"(,\s*(and|but|or|so|yet|nor|for)\s+(i|you|he|she|it|we|they|this|that|these|those|there|)"
      R"(my|your|his|her|its|our|their|the|a|an|someone|everyone|nobody|nothing|everything)\b)",
      std::regex::icase);
  return re;
}

bool HasWord(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

}  // namespace

int CountTUnits(std::string_view text) {
  int count = 0;
  for (const std::string &sentence : SplitSentences(text)) {
    size_t start = 0;
    while (start <= sentence.size()) {
      size_t semi = sentence.find(';', start);
      std::string part = sentence.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
      if (HasWord(part)) {
        count += 1 + static_cast<int>(std::distance(
                         std::sregex_iterator(part.begin(), part.end(), ClauseJoin()),
                         std::sregex_iterator()));
      }
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
  }
  return count;
}

std::string_view ItemStatusName(ItemStatus s) {
  switch (s) {
    case ItemStatus::kPending: return "pending";
    case ItemStatus::kAnswered: return "answered";
    case ItemStatus::kSkipped: return "skipped";
    case ItemStatus::kFailed: return "failed";
  }
  return "pending";
}

ItemStatus ParseItemStatus(std::string_view s) {
  for (ItemStatus x : {ItemStatus::kPending, ItemStatus::kAnswered, ItemStatus::kSkipped,
                       ItemStatus::kFailed}) {
    if (ItemStatusName(x) == s) return x;
  }
  Fail(ErrorCode::kParse, "unknown item status: " + std::string(s));
}

FactCheckItem *HitlSession::Find(const std::string &item_id) {
  for (auto &item : items) {
    if (item.id == item_id) return &item;
  }
  return nullptr;
}

const FactCheckItem *HitlSession::NextPending() const {
  for (const auto &item : items) {
    if (item.status == ItemStatus::kPending) return &item;
  }
  return nullptr;
}

std::array<int, 4> AllocateItems(const std::array<size_t, 4> &layer_sizes, int n_items) {
  std::array<int, 4> out{};
  size_t total = 0;
  for (size_t s : layer_sizes) total += s;
  if (total == 0 || n_items <= 0) return out;
  if (static_cast<size_t>(n_items) >= total) {
    for (size_t i = 0; i < 4; ++i) out[i] = static_cast<int>(layer_sizes[i]);
    return out;
  }
  int assigned = 0;
  for (size_t i = 0; i < 4; ++i) {
    out[i] = static_cast<int>(layer_sizes[i] * static_cast<size_t>(n_items) / total);
    assigned += out[i];
  }
  while (assigned < n_items) {
    for (size_t i = 0; i < 4 && assigned < n_items; ++i) {
      if (static_cast<size_t>(out[i]) < layer_sizes[i]) {
        ++out[i];
        ++assigned;
      }
    }
  }
  return out;
}

std::string GenerateQuestion(LlmClient &client, const PtmNode &node, bool *used_fallback) {
  LlmRequest req{"QA", {{"journal_entries", node.content}}, 0.0, ResponseShape::kArray};
  std::string question;
  try {
    Json reply = client.SendJson(req, [](const Json &j) -> std::optional<std::string> {
      if (!j.is_array()) return "expected a JSON array";
      return std::nullopt;
    });
    for (const Json &item : reply) {
      if (item.is_object() && item.contains("query") && item["query"].is_string()) {
        question = Trim(item["query"].get<std::string>());
        if (!question.empty()) break;
      }
    }
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kParse) throw;
  }
  if (used_fallback) *used_fallback = question.empty();
  if (question.empty()) question = "Is it true that " + node.title + "? Please explain.";
  return question;
}

HitlSession OpenSession(const LayeredGraph &graph, LlmClient &client, int n_items, uint64_t seed) {
  if (graph.phase_state() != PhaseState::kFullBuilt && graph.phase_state() != PhaseState::kRefined) {
    Fail(ErrorCode::kFailedPrecondition,
         "review needs a fully built graph, phase is " +
             std::string(PhaseStateName(graph.phase_state())));
  }
  if (n_items < 1) Fail(ErrorCode::kInvalidArgument, "session size must be >= 1");
  HitlSession session;
  session.user_id = graph.user_id();
  session.seed = seed;
  session.graph_version_pre = session.graph_version_post = graph.version();

  std::array<std::vector<const PtmNode *>, 4> by_layer;
  std::array<size_t, 4> sizes{};
  size_t total = 0;
  for (int l = 1; l <= 4; ++l) {
    by_layer[static_cast<size_t>(l - 1)] = graph.NodesAt(LayerFromIndex(l));
    sizes[static_cast<size_t>(l - 1)] = by_layer[static_cast<size_t>(l - 1)].size();
    total += sizes[static_cast<size_t>(l - 1)];
  }
  if (total < static_cast<size_t>(n_items)) {
    session.warnings.push_back("only " + std::to_string(total) + " nodes for a session of " +
                               std::to_string(n_items));
  }
  std::array<int, 4> quota = AllocateItems(sizes, n_items);

  SeededRng rng(seed);
  std::vector<const PtmNode *> chosen;
  for (size_t l = 0; l < 4; ++l) {
    for (size_t i : rng.Sample(by_layer[l].size(), static_cast<size_t>(quota[l]))) {
      chosen.push_back(by_layer[l][i]);
    }
  }
  rng.Shuffle(chosen);

  struct Asked {
    std::string question;
    bool fallback = false;
  };
  auto asked = BoundedParallelMap<Asked>(chosen.size(), client.max_in_flight(), [&](size_t i) {
    Asked a;
    a.question = GenerateQuestion(client, *chosen[i], &a.fallback);
    return a;
  });
  for (size_t i = 0; i < chosen.size(); ++i) {
    FactCheckItem item;
    item.id = "q" + std::to_string(i + 1);
    item.node_id = chosen[i]->id;
    item.layer = chosen[i]->layer;
    item.question = asked[i].question;
    item.fallback_question = asked[i].fallback;
    session.items.push_back(std::move(item));
  }
  return session;
}

FeedbackRecord MakeFeedback(const std::string &item_id, const std::string &answer,
                            const std::string &submitted_at) {
  return FeedbackRecord{item_id, answer, WordCount(answer), CountTUnits(answer), submitted_at};
}

LayeredGraph ApplyFeedback(const LayeredGraph &graph, LlmClient &client, const std::string &node_id,
                           const std::string &question, const FeedbackRecord &feedback) {
  if (Trim(feedback.answer).empty()) Fail(ErrorCode::kInvalidArgument, "empty feedback");
  const PtmNode &node = graph.node(node_id);
  std::string observations = "Question asked to the user: " + question +
                             "\nUser's answer: " + feedback.answer;
  LlmRequest req{"NR",
                 {{"existing_node_content", node.content}, {"new_instances_text", observations}},
                 0.0,
                 ResponseShape::kObject};
  Json reply = client.SendJson(req, [](const Json &j) -> std::optional<std::string> {
    if (!j.is_object() || !j.contains("updated_content") || !j["updated_content"].is_string() ||
        Trim(j["updated_content"].get<std::string>()).empty()) {
      return "expected {\"updated_content\": string}";
    }
    return std::nullopt;
  });
  GraphEdit edit;
  edit.revisions.push_back({node_id, Trim(reply["updated_content"].get<std::string>()),
                            feedback.item_id, feedback.submitted_at});
  edit.phase_state = PhaseState::kRefined;
  if (!feedback.submitted_at.empty()) edit.generated_at = feedback.submitted_at;
  return graph.Apply(edit);
}

namespace {

FactCheckItem &OpenItem(HitlSession &session, const std::string &item_id) {
  FactCheckItem *item = session.Find(item_id);
  if (!item) Fail(ErrorCode::kNotFound, "no review item " + item_id);
  if (item->status != ItemStatus::kPending) {
    Fail(ErrorCode::kFailedPrecondition,
         "item " + item_id + " is already " + std::string(ItemStatusName(item->status)));
  }
  return *item;
}

}  // namespace

LayeredGraph SubmitAnswer(HitlSession &session, const LayeredGraph &graph, LlmClient &client,
                          const std::string &item_id, const std::string &answer,
                          const std::string &submitted_at) {
  FactCheckItem &item = OpenItem(session, item_id);
  if (Trim(answer).empty()) Fail(ErrorCode::kInvalidArgument, "answer must not be empty");
  FeedbackRecord fb = MakeFeedback(item_id, answer, submitted_at);
  session.feedback.push_back(fb);
  try {
    LayeredGraph next = ApplyFeedback(graph, client, item.node_id, item.question, fb);
    item.status = ItemStatus::kAnswered;
    session.graph_version_post = next.version();
    return next;
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kParse) throw;
    item.status = ItemStatus::kFailed;
    item.error = e.what();
    return graph;
  }
}

void SkipItem(HitlSession &session, const std::string &item_id) {
  OpenItem(session, item_id).status = ItemStatus::kSkipped;
}

Json SessionToJson(const HitlSession &s) {
  Json items = Json::array();
  for (const auto &i : s.items) {
    Json j{{"id", i.id},
           {"node_id", i.node_id},
           {"layer", LayerName(i.layer)},
           {"question", i.question},
           {"fallback_question", i.fallback_question},
           {"status", ItemStatusName(i.status)}};
    if (!i.error.empty()) j["error"] = i.error;
    items.push_back(j);
  }
  Json feedback = Json::array();
  for (const auto &f : s.feedback) {
    feedback.push_back(Json{{"item_id", f.item_id},
                            {"answer", f.answer},
                            {"word_count", f.word_count},
                            {"t_unit_count", f.t_unit_count},
                            {"submitted_at", f.submitted_at}});
  }
  return Json{{"user_id", s.user_id},
              {"seed", s.seed},
              {"graph_version_pre", s.graph_version_pre},
              {"graph_version_post", s.graph_version_post},
              {"t_unit_heuristic", kTUnitHeuristic},
              {"warnings", s.warnings},
              {"items", items},
              {"feedback", feedback}};
}

HitlSession SessionFromJson(const Json &j) {
  try {
    HitlSession s;
    s.user_id = j.at("user_id").get<std::string>();
    s.seed = j.at("seed").get<uint64_t>();
    s.graph_version_pre = j.at("graph_version_pre").get<int>();
    s.graph_version_post = j.at("graph_version_post").get<int>();
    s.warnings = j.value("warnings", std::vector<std::string>{});
    for (const Json &i : j.at("items")) {
      FactCheckItem item;
      item.id = i.at("id").get<std::string>();
      item.node_id = i.at("node_id").get<std::string>();
      item.layer = ParseLayer(i.at("layer").get<std::string>());
      item.question = i.at("question").get<std::string>();
      item.fallback_question = i.value("fallback_question", false);
      item.status = ParseItemStatus(i.at("status").get<std::string>());
      item.error = i.value("error", "");
      s.items.push_back(std::move(item));
    }
    for (const Json &f : j.at("feedback")) {
      s.feedback.push_back(FeedbackRecord{f.at("item_id").get<std::string>(),
                                          f.at("answer").get<std::string>(),
                                          f.at("word_count").get<int>(),
                                          f.at("t_unit_count").get<int>(),
                                          f.value("submitted_at", "")});
    }
    return s;
  } catch (const Json::exception &e) {
    Fail(ErrorCode::kParse, std::string("malformed review session: ") + e.what());
  }
}

Json SessionReport(const HitlSession &s) {
  std::map<std::string, int> by_status;
  for (const auto &i : s.items) by_status[std::string(ItemStatusName(i.status))]++;
  int words = 0, tunits = 0;
  for (const auto &f : s.feedback) {
    words += f.word_count;
    tunits += f.t_unit_count;
  }
  double n = static_cast<double>(s.feedback.size());
  Json status = Json::object();
  for (const char *k : {"pending", "answered", "skipped", "failed"}) status[k] = by_status[k];
  Json full = SessionToJson(s);
  return Json{{"user_id", s.user_id},
              {"items", full["items"]},
              {"feedback", full["feedback"]},
              {"feedback_stats",
               {{"answers", s.feedback.size()},
                {"status", status},
                {"total_words", words},
                {"total_t_units", tunits},
                {"mean_words", n > 0 ? words / n : 0.0},
                {"mean_t_units", n > 0 ? tunits / n : 0.0},
                {"t_unit_heuristic", kTUnitHeuristic}}},
              {"version_pre", s.graph_version_pre},
              {"version_post", s.graph_version_post}};
}

std::string HitlStore::Path(const std::string &user_id) const {
  ValidateUserId(user_id);
  return (std::filesystem::path(root_) / "users" / user_id / "hitl" / "session.json").string();
}

bool HitlStore::Has(const std::string &user_id) const {
  return std::filesystem::exists(Path(user_id));
}

HitlSession HitlStore::Load(const std::string &user_id) const {
  std::string path = Path(user_id);
  if (!std::filesystem::exists(path)) Fail(ErrorCode::kNotFound, "no review session for " + user_id);
  return SessionFromJson(ParseJsonOrDie(ReadFile(path), path));
}

void HitlStore::Save(const HitlSession &session) const {
  WriteFileAtomic(Path(session.user_id), SessionToJson(session).dump(2) + "\n");
}

}  // namespace ptm
