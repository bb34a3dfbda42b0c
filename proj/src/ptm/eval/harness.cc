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

#include "ptm/eval/harness.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ptm/base/error.h"
#include "ptm/base/parallel.h"
#include "ptm/base/random.h"
#include "ptm/base/text.h"

namespace ptm {

Json QaItemToJson(const QaItem &item) {
  return Json{{"id", item.id},
              {"query", item.query},
              {"ground_truth", item.ground_truth},
              {"source_window", {{"start", item.window_start.ToString()}, {"end", item.window_end.ToString()}}},
              {"target_layer_hint",
               item.target_layer_hint ? Json(LayerName(*item.target_layer_hint)) : Json(nullptr)}};
}

QaItem QaItemFromJson(const Json &j) {
  QaItem item;
  item.id = j.at("id").get<std::string>();
  item.query = j.at("query").get<std::string>();
  item.ground_truth = j.at("ground_truth").get<std::string>();
  item.window_start = Date::ParseOrDie(j.at("source_window").at("start").get<std::string>());
  item.window_end = Date::ParseOrDie(j.at("source_window").at("end").get<std::string>());
  if (j.contains("target_layer_hint") && j["target_layer_hint"].is_string()) {
    item.target_layer_hint = ParseLayer(j["target_layer_hint"].get<std::string>());
  }
  return item;
}

std::vector<QaItem> GenerateTestsetWindow(LlmClient &client, const std::vector<JournalEntry> &entries,
                                          Date start, Date end, const std::string &id_prefix,
                                          int max_items) {
  std::ostringstream text;
  int in_window = 0;
  for (const auto &e : entries) {
    if (e.date < start || end < e.date) continue;
    if (in_window++) text << "\n";
    text << "[" << e.date.ToString() << "] " << e.text << "\n";
  }
  if (in_window == 0) {
    Fail(ErrorCode::kFailedPrecondition,
         "no journal entries between " + start.ToString() + " and " + end.ToString());
  }
  LlmRequest req{"QA", {{"journal_entries", text.str()}}, 0.0, ResponseShape::kArray};
  Json reply = client.SendJson(req, [](const Json &j) -> std::optional<std::string> {
    if (!j.is_array()) return "expected a JSON array";
    return std::nullopt;
  });
  std::vector<QaItem> out;
  for (const Json &q : reply) {
    if (!q.is_object() || !q.contains("query") || !q.contains("ground_truth") ||
        !q["query"].is_string() || !q["ground_truth"].is_string()) {
      continue;
    }
    QaItem item;
    item.query = Trim(q["query"].get<std::string>());
    item.ground_truth = Trim(q["ground_truth"].get<std::string>());
    if (item.query.empty() || item.ground_truth.empty()) continue;
    if (max_items > 0 && static_cast<int>(out.size()) >= max_items) break;
    item.id = id_prefix + "-" + std::to_string(out.size() + 1);
    item.window_start = start;
    item.window_end = end;
    item.target_layer_hint = LayerFromIndex(1 + static_cast<int>(out.size() % 4));
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<QaItem> GenerateTestset(LlmClient &client, const std::vector<JournalEntry> &entries,
                                    const TestsetConfig &config) {
  std::vector<Date> dates;
  for (const auto &e : entries) dates.push_back(e.date);
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  if (dates.empty()) Fail(ErrorCode::kFailedPrecondition, "no journal entries");
  SeededRng rng(config.seed);
  std::vector<Date> starts;
  for (size_t i : rng.Sample(dates.size(), static_cast<size_t>(std::max(1, config.num_windows)))) {
    starts.push_back(dates[i]);
  }
  std::sort(starts.begin(), starts.end());
  std::vector<QaItem> out;
  for (size_t w = 0; w < starts.size(); ++w) {
    auto items = GenerateTestsetWindow(client, entries, starts[w],
                                       starts[w] + (std::max(1, config.window_days) - 1),
                                       "w" + std::to_string(w + 1), config.max_items_per_window);
    out.insert(out.end(), items.begin(), items.end());
  }
  return out;
}

LabelSelection RepairLabelSelection(const Json &reply, size_t num_labels, int num_target) {
  LabelSelection out;
  std::set<int> used;
  for (const Json &v : reply) {
    if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == std::floor(v.get<double>()))) {
      out.repairs.push_back("dropped non-integer " + v.dump());
      continue;
    }
    long id = v.is_number_integer() ? v.get<long>() : static_cast<long>(v.get<double>());
    if (id < 0 || id >= static_cast<long>(num_labels)) {
      out.repairs.push_back("dropped out-of-range " + std::to_string(id));
      continue;
    }
    if (used.count(static_cast<int>(id))) {
      out.repairs.push_back("dropped duplicate " + std::to_string(id));
      continue;
    }
    if (static_cast<int>(out.ids.size()) >= num_target) {
      out.repairs.push_back("truncated extra " + std::to_string(id));
      continue;
    }
    used.insert(static_cast<int>(id));
    out.ids.push_back(static_cast<int>(id));
  }
  for (int i = 0; static_cast<int>(out.ids.size()) < num_target && i < static_cast<int>(num_labels); ++i) {
    if (used.insert(i).second) {
      out.ids.push_back(i);
      out.repairs.push_back("filled " + std::to_string(i));
    }
  }
  return out;
}

LabelSelection SelectLabels(LlmClient &client, const std::string &query,
                            const std::vector<std::string> &labels, int num_target) {
  if (num_target < 1 || static_cast<size_t>(num_target) > labels.size()) {
    Fail(ErrorCode::kFailedPrecondition, "cannot select " + std::to_string(num_target) + " of " +
                                             std::to_string(labels.size()) + " labels");
  }
  std::ostringstream data;
  for (size_t i = 0; i < labels.size(); ++i) data << "\n" << i << ": " << labels[i];
  LlmRequest req{"LS",
                 {{"num_target", std::to_string(num_target)}, {"query", query}, {"label_data", data.str()}},
                 0.0,
                 ResponseShape::kArray};
  Json reply = client.SendJson(req, [](const Json &j) -> std::optional<std::string> {
    if (!j.is_array()) return "expected a JSON array of integers";
    return std::nullopt;
  });
  return RepairLabelSelection(reply, labels.size(), num_target);
}

PtmAnswer AnswerFromPtm(LlmClient &client, const LayeredGraph &graph, const std::string &query,
                        int num_target) {
  if (graph.phase_state() != PhaseState::kFullBuilt && graph.phase_state() != PhaseState::kRefined) {
    Fail(ErrorCode::kFailedPrecondition, "answering needs a fully built graph");
  }
  std::vector<const PtmNode *> nodes;
  for (int l = 1; l <= 4; ++l) {
    for (const auto *n : graph.NodesAt(LayerFromIndex(l))) nodes.push_back(n);
  }
  if (nodes.empty()) Fail(ErrorCode::kFailedPrecondition, "graph has no nodes");
  std::vector<std::string> labels;
  for (const auto *n : nodes) labels.push_back(n->title);
  LabelSelection sel =
      SelectLabels(client, query, labels, std::min(num_target, static_cast<int>(labels.size())));

  PtmAnswer out;
  out.repairs = sel.repairs;
  std::ostringstream context;
  for (size_t i = 0; i < sel.ids.size(); ++i) {
    const PtmNode *n = nodes[static_cast<size_t>(sel.ids[i])];
    out.context_node_ids.push_back(n->id);
    if (i) context << "\n\n";
    context << n->title << ": " << n->content;
  }
  LlmRequest req{"CA",
                 {{"INSERT_RETRIEVED_CONTEXT_HERE", context.str()},
                  {"INSERT_USER_QUESTION_HERE", query}},
                 0.0,
                 ResponseShape::kText};
  out.answer = client.Send(req);
  return out;
}

AtomicMatchReport AtomicReportFromReply(const Json &reply) {
  AtomicMatchReport r;
  r.true_positives = reply.at("true_positives");
  r.false_negatives = reply.at("false_negatives");
  r.false_positives = reply.at("false_positives");
  r.counts.tp = static_cast<long>(r.true_positives.size());
  r.counts.fn = static_cast<long>(r.false_negatives.size());
  r.counts.fp = static_cast<long>(r.false_positives.size());
  return r;
}

AtomicMatchReport AtomicMatch(LlmClient &client, const std::string &query,
                              const std::string &prediction, const std::string &ground_truth) {
  if (Trim(prediction).empty() || Trim(ground_truth).empty()) {
    Fail(ErrorCode::kInvalidArgument, "atomic matching needs non-empty texts");
  }
  LlmRequest req{"PE", {{"query", query}, {"pred", prediction}, {"gt", ground_truth}}, 0.0,
                 ResponseShape::kObject};
  Json reply = client.SendJson(req, [](const Json &j) -> std::optional<std::string> {
    if (!j.is_object()) return "expected a JSON object";
    for (const char *k : {"true_positives", "false_negatives", "false_positives"}) {
      if (!j.contains(k) || !j[k].is_array()) return std::string("missing array ") + k;
    }
    return std::nullopt;
  });
  return AtomicReportFromReply(reply);
}

std::vector<ItemEvaluation> EvaluateItems(LlmClient &client, const LayeredGraph &graph,
                                          const std::vector<QaItem> &items, int num_target) {
  return BoundedParallelMap<ItemEvaluation>(items.size(), client.max_in_flight(), [&](size_t i) {
    ItemEvaluation e;
    e.item = items[i];
    try {
      PtmAnswer a = AnswerFromPtm(client, graph, e.item.query, num_target);
      e.prediction = a.answer;
      e.context_node_ids = a.context_node_ids;
    } catch (const Error &err) {
      if (err.code() == ErrorCode::kFailedPrecondition) throw;
      e.outcome = ItemOutcome::kUnanswered;
      e.error = err.what();
      return e;
    }
    try {
      e.report = AtomicMatch(client, e.item.query, e.prediction, e.item.ground_truth);
      e.report.item_id = e.item.id;
    } catch (const Error &err) {
      e.outcome = ItemOutcome::kUnevaluated;
      e.error = err.what();
    }
    return e;
  });
}

Json ItemEvaluationToJson(const ItemEvaluation &e) {
  static const char *kOutcome[] = {"evaluated", "unanswered", "unevaluated"};
  Json j = QaItemToJson(e.item);
  j["outcome"] = kOutcome[static_cast<int>(e.outcome)];
  j["prediction"] = e.prediction;
  j["context_node_ids"] = e.context_node_ids;
  if (e.outcome == ItemOutcome::kEvaluated) {
    j["tp"] = e.report.counts.tp;
    j["fp"] = e.report.counts.fp;
    j["fn"] = e.report.counts.fn;
    j["true_positives"] = e.report.true_positives;
    j["false_negatives"] = e.report.false_negatives;
    j["false_positives"] = e.report.false_positives;
  }
  if (!e.error.empty()) j["error"] = e.error;
  return j;
}

}  // namespace ptm
