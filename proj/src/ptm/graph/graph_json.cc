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

#include "ptm/graph/graph_json.h"

#include "ptm/base/error.h"

namespace ptm {

namespace {

std::string Str(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return "";
  if (!it->is_string()) Fail(ErrorCode::kParse, std::string("field ") + key + " must be a string");
  return it->get<std::string>();
}

}  // namespace

Json InstanceToJson(const BehavioralInstance &x) {
  Json j;
  j["id"] = x.id;
  j["layer"] = "L0";
  j["what"] = x.what;
  j["when"] = x.when;
  j["where"] = x.where;
  j["who"] = x.who;
  j["why"] = x.why;
  j["how"] = x.how;
  j["date"] = x.date.ToString();
  j["weekday"] = x.weekday ? Json(*x.weekday) : Json(nullptr);
  if (x.time_window) {
    j["time_window"] = {{"start", FormatClock(x.time_window->start_minutes)},
                        {"end", FormatClock(x.time_window->end_minutes)}};
  } else {
    j["time_window"] = nullptr;
  }
  j["journal_entry_id"] = x.journal_entry_id;
  return j;
}

BehavioralInstance InstanceFromJson(const Json &j) {
  BehavioralInstance x;
  x.id = Str(j, "id");
  x.what = Str(j, "what");
  x.when = Str(j, "when");
  x.where = Str(j, "where");
  x.who = Str(j, "who");
  x.why = Str(j, "why");
  x.how = Str(j, "how");
  x.date = Date::ParseOrDie(Str(j, "date"));
  if (j.contains("weekday") && j["weekday"].is_string()) x.weekday = j["weekday"].get<std::string>();
  if (j.contains("time_window") && j["time_window"].is_object()) {
    auto a = ParseClock(Str(j["time_window"], "start"));
    auto b = ParseClock(Str(j["time_window"], "end"));
    if (!a || !b) Fail(ErrorCode::kParse, "bad time_window on " + x.id);
    x.time_window = TimeWindow{*a, *b};
  }
  x.journal_entry_id = Str(j, "journal_entry_id");
  return x;
}

Json NodeToJson(const PtmNode &n) {
  Json j;
  j["id"] = n.id;
  j["layer"] = std::string(LayerName(n.layer));
  j["title"] = n.title;
  j["content"] = n.content;
  if (n.layer == Layer::kL1) {
    j["source_instances"] = n.source_ids;
  } else {
    j["dimension_id"] = n.dimension_id ? Json(*n.dimension_id) : Json(nullptr);
    j["source_nodes"] = n.source_ids;
  }
  Json revs = Json::array();
  for (const auto &r : n.revisions) {
    revs.push_back({{"timestamp", r.timestamp},
                    {"prior_content", r.prior_content},
                    {"feedback_id", r.feedback_id},
                    {"content", r.content}});
  }
  j["revisions"] = revs;
  return j;
}

PtmNode NodeFromJson(const Json &j) {
  PtmNode n;
  n.id = Str(j, "id");
  n.layer = ParseLayer(Str(j, "layer"));
  n.title = Str(j, "title");
  n.content = Str(j, "content");
  const char *key = n.layer == Layer::kL1 ? "source_instances" : "source_nodes";
  if (j.contains(key)) n.source_ids = j[key].get<std::vector<std::string>>();
  if (j.contains("dimension_id") && j["dimension_id"].is_string()) {
    n.dimension_id = j["dimension_id"].get<std::string>();
  }
  if (j.contains("revisions")) {
    for (const auto &r : j["revisions"]) {
      n.revisions.push_back(Revision{Str(r, "timestamp"), Str(r, "prior_content"),
                                     Str(r, "feedback_id"), Str(r, "content")});
    }
  }
  return n;
}

Json DimensionToJson(const AnalyticalDimension &d) {
  return Json{{"id", d.id},
              {"layer", std::string(LayerName(d.layer))},
              {"title", d.title},
              {"description", d.description}};
}

AnalyticalDimension DimensionFromJson(const Json &j) {
  return AnalyticalDimension{Str(j, "id"), ParseLayer(Str(j, "layer")), Str(j, "title"),
                             Str(j, "description")};
}

Json LayerToJson(const LayeredGraph &graph, Layer layer) {
  Json arr = Json::array();
  if (layer == Layer::kL0) {
    for (const auto *x : graph.InstancesByDate()) arr.push_back(InstanceToJson(*x));
  } else {
    for (const auto *n : graph.NodesAt(layer)) arr.push_back(NodeToJson(*n));
  }
  return arr;
}

Json GraphToJson(const LayeredGraph &graph) {
  Json doc;
  doc["user_id"] = graph.user_id();
  doc["version"] = graph.version();
  doc["phase_state"] = std::string(PhaseStateName(graph.phase_state()));
  doc["generated_at"] = graph.generated_at();
  Json dims = Json::array();
  for (Layer l : {Layer::kL2, Layer::kL3, Layer::kL4}) {
    for (const auto *d : graph.DimensionsAt(l)) dims.push_back(DimensionToJson(*d));
  }
  doc["dimensions"] = dims;
  Json nodes = Json::array();
  for (int l = 0; l <= 4; ++l) {
    for (auto &n : LayerToJson(graph, LayerFromIndex(l))) nodes.push_back(std::move(n));
  }
  doc["nodes"] = nodes;
  return doc;
}

LayeredGraph GraphFromJson(const Json &doc) {
  std::vector<BehavioralInstance> instances;
  std::vector<PtmNode> nodes;
  std::vector<AnalyticalDimension> dims;
  for (const auto &d : doc.value("dimensions", Json::array())) dims.push_back(DimensionFromJson(d));
  for (const auto &n : doc.value("nodes", Json::array())) {
    if (Str(n, "layer") == "L0") {
      instances.push_back(InstanceFromJson(n));
    } else {
      nodes.push_back(NodeFromJson(n));
    }
  }
  return LayeredGraph::Restore(Str(doc, "user_id"), doc.value("version", 0),
                               ParsePhaseState(doc.value("phase_state", "ingested")),
                               Str(doc, "generated_at"), std::move(instances),
                               std::move(dims), std::move(nodes));
}

}  // namespace ptm
