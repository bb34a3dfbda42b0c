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

#include "ptm/eval/report.h"

#include <cstdio>
#include <map>
#include <sstream>

#include "ptm/eval/semantics.h"
#include "ptm/eval/stats.h"
#include "ptm/eval/vocabulary.h"

namespace ptm {

namespace {

constexpr Layer kNodeLayers[] = {Layer::kL1, Layer::kL2, Layer::kL3, Layer::kL4};

std::string Fixed(const Json &v, int digits = 4) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v.get<double>());
  return buf;
}

// Mean rating per node for one phase.
std::map<std::string, double> NodeMeans(const std::vector<LikertRecord> &records, ReviewPhase phase) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto &r : records) {
    if (r.phase != phase) continue;
    acc[r.node_id].first += r.rating;
    acc[r.node_id].second++;
  }
  std::map<std::string, double> out;
  for (const auto &[id, a] : acc) out[id] = a.first / a.second;
  return out;
}

}  // namespace

double LayerJaccard(const LayeredGraph &graph, Layer layer,
                    const std::vector<JournalEntry> &journals) {
  std::vector<std::string> node_texts, journal_texts;
  for (const auto *n : graph.NodesAt(layer)) {
    node_texts.push_back(n->title);
    node_texts.push_back(n->content);
  }
  for (const auto &e : journals) journal_texts.push_back(e.text);
  return Jaccard(Vocabulary(node_texts), Vocabulary(journal_texts));
}

Json BuildEvaluationReport(const std::string &condition,
                           const std::vector<UserEvaluationInput> &users, EmbeddingProvider &provider,
                           const std::optional<Json> &pre_report) {
  Json report{{"condition", condition},
              {"stopword_list", kStopwordListVersion},
              {"t_unit_heuristic", kTUnitHeuristic}};

  std::vector<Counts> all_items, member_counts;
  std::map<Layer, std::vector<Counts>> layer_items;
  std::map<Layer, std::map<std::string, Counts>> layer_members;
  int unanswered = 0, unevaluated = 0;
  Json per_user = Json::array();
  std::map<std::string, double> user_f1;
  for (const auto &u : users) {
    Counts uc;
    int evaluated = 0, u_unanswered = 0, u_unevaluated = 0;
    for (const auto &e : u.items) {
      if (e.outcome == ItemOutcome::kUnanswered) {
        ++u_unanswered;
        continue;
      }
      if (e.outcome == ItemOutcome::kUnevaluated) {
        ++u_unevaluated;
        continue;
      }
      ++evaluated;
      uc += e.report.counts;
      all_items.push_back(e.report.counts);
      if (e.item.target_layer_hint) {
        layer_items[*e.item.target_layer_hint].push_back(e.report.counts);
        layer_members[*e.item.target_layer_hint][u.user_id] += e.report.counts;
      }
    }
    unanswered += u_unanswered;
    unevaluated += u_unevaluated;
    member_counts.push_back(uc);
    Prf prf = ComputePrf(uc);
    user_f1[u.user_id] = prf.f1;
    per_user.push_back(Json{{"user_id", u.user_id},
                            {"graph_version", u.graph.version()},
                            {"evaluated", evaluated},
                            {"unanswered", u_unanswered},
                            {"unevaluated", u_unevaluated},
                            {"tp", uc.tp},
                            {"fp", uc.fp},
                            {"fn", uc.fn},
                            {"precision", prf.precision},
                            {"recall", prf.recall},
                            {"f1", prf.f1}});
  }
  report["users"] = per_user;
  report["overall"] = SummaryToJson(Summarize(all_items, member_counts));
  report["overall"]["unanswered"] = unanswered;
  report["overall"]["unevaluated"] = unevaluated;

  Json by_layer = Json::object();
  for (Layer layer : kNodeLayers) {
    std::vector<Counts> members;
    for (const auto &[uid, c] : layer_members[layer]) members.push_back(c);
    by_layer[std::string(LayerName(layer))] = SummaryToJson(Summarize(layer_items[layer], members));
  }
  report["by_layer"] = by_layer;

  // Layer semantics and vocabulary overlap, averaged over users.
  Json semantics = Json::array();
  Json jaccard = Json::object();
  for (Layer layer : kNodeLayers) {
    double coh = 0, sim = 0, within = 0, sil = 0, topics = 0, jac = 0;
    int defined = 0, sil_n = 0;
    for (const auto &u : users) {
      std::vector<std::string> texts;
      for (const auto *n : u.graph.NodesAt(layer)) texts.push_back(n->content);
      LayerSemantics s = MeasureLayer(layer, texts, provider);
      jac += LayerJaccard(u.graph, layer, u.journals);
      if (!s.defined) continue;
      ++defined;
      coh += s.coherence;
      sim += s.mean_pairwise_similarity;
      within += s.within_topic_similarity;
      topics += s.topic_count;
      if (s.silhouette) {
        sil += *s.silhouette;
        ++sil_n;
      }
    }
    Json entry{{"layer", LayerName(layer)}, {"users", defined}};
    if (defined > 0) {
      entry["coherence"] = coh / defined;
      entry["mean_pairwise_similarity"] = sim / defined;
      entry["within_topic_similarity"] = within / defined;
      entry["silhouette"] = sil_n ? Json(sil / sil_n) : Json(nullptr);
      entry["topic_count"] = topics / defined;
    } else {
      entry["coherence"] = entry["mean_pairwise_similarity"] = entry["within_topic_similarity"] =
          entry["silhouette"] = entry["topic_count"] = nullptr;
    }
    semantics.push_back(entry);
    jaccard[std::string(LayerName(layer))] =
        users.empty() ? Json(nullptr) : Json(jac / static_cast<double>(users.size()));
  }
  report["semantics"] = semantics;
  report["jaccard_by_layer"] = jaccard;

  // Human ratings, feedback effort and their relationship.
  std::vector<LikertRecord> ratings;
  std::vector<double> words, tunits, delta, likert_pre, likert_post;
  for (const auto &u : users) {
    ratings.insert(ratings.end(), u.likert.begin(), u.likert.end());
    auto pre = NodeMeans(u.likert, ReviewPhase::kPreHitl);
    auto post = NodeMeans(u.likert, ReviewPhase::kPostHitl);
    for (const auto &[id, m] : pre) {
      auto it = post.find(id);
      if (it == post.end()) continue;
      likert_pre.push_back(m);
      likert_post.push_back(it->second);
    }
    if (!u.session) continue;
    for (const auto &fb : u.session->feedback) {
      const FactCheckItem *item = nullptr;
      for (const auto &i : u.session->items) {
        if (i.id == fb.item_id) item = &i;
      }
      if (!item || item->status != ItemStatus::kAnswered) continue;
      auto a = pre.find(item->node_id), b = post.find(item->node_id);
      if (a == pre.end() || b == post.end()) continue;
      words.push_back(fb.word_count);
      tunits.push_back(fb.t_unit_count);
      delta.push_back(b->second - a->second);
    }
  }
  report["likert"] = SummarizeLikert(ratings);
  report["correlations"] = Json{
      {"word_count_vs_delta_rating", TestResultToJson(PearsonR(words, delta), "r")},
      {"t_units_vs_delta_rating", TestResultToJson(PearsonR(tunits, delta), "r")}};

  Json t_tests = Json::object();
  t_tests["likert_pre_vs_post"] = TestResultToJson(PairedT(likert_pre, likert_post), "t");
  if (pre_report) {
    std::vector<double> f1_pre, f1_post;
    for (const Json &u : pre_report->at("users")) {
      auto it = user_f1.find(u.at("user_id").get<std::string>());
      if (it == user_f1.end()) continue;
      f1_pre.push_back(u.at("f1").get<double>());
      f1_post.push_back(it->second);
    }
    t_tests["f1_pre_vs_post"] = TestResultToJson(PairedT(f1_pre, f1_post), "t");
  } else {
    t_tests["f1_pre_vs_post"] = nullptr;
  }
  report["t_tests"] = t_tests;
  return report;
}

std::string EvaluationCsv(const Json &r) {
  std::ostringstream os;
  const std::string cond = r.at("condition").get<std::string>();
  auto summary_row = [&](const std::string &key, const Json &s) {
    os << key << "," << Fixed(s["tp"]) << "," << Fixed(s["fp"]) << "," << Fixed(s["fn"]) << ","
       << Fixed(s["precision"]) << "," << Fixed(s["recall"]) << "," << Fixed(s["f1"]) << ","
       << Fixed(s["sd"]) << "," << Fixed(s["n"]) << "\n";
  };
  os << "# overall\ncondition,tp,fp,fn,precision,recall,f1,sd,n\n";
  summary_row(cond, r.at("overall"));
  os << "\n# by_layer\nlayer,tp,fp,fn,precision,recall,f1,sd,n\n";
  for (const auto &[layer, s] : r.at("by_layer").items()) summary_row(layer, s);
  os << "\n# semantics\nlayer,coherence,mean_pairwise_similarity,silhouette,topic_count\n";
  for (const Json &s : r.at("semantics")) {
    os << s["layer"].get<std::string>() << "," << Fixed(s["coherence"]) << ","
       << Fixed(s["mean_pairwise_similarity"]) << "," << Fixed(s["silhouette"]) << ","
       << Fixed(s["topic_count"], 2) << "\n";
  }
  os << "\n# jaccard\nlayer,jaccard\n";
  for (const auto &[layer, v] : r.at("jaccard_by_layer").items()) os << layer << "," << Fixed(v) << "\n";
  os << "\n# likert\nphase,layer,mean,sd,n,normalized_percent\n";
  for (const auto &[phase, by] : r.at("likert").items()) {
    for (const auto &[layer, s] : by.items()) {
      os << phase << "," << layer << "," << Fixed(s["mean"]) << "," << Fixed(s["sd"]) << ","
         << Fixed(s["n"]) << "," << Fixed(s["normalized_percent"], 2) << "\n";
    }
  }
  os << "\n# correlations\nmeasure,r,p,n\n";
  for (const auto &[name, c] : r.at("correlations").items()) {
    os << name << "," << Fixed(c["r"]) << "," << Fixed(c["p"]) << "," << Fixed(c["n"]) << "\n";
  }
  os << "\n# t_tests\nmeasure,t,p,n\n";
  for (const auto &[name, t] : r.at("t_tests").items()) {
    if (t.is_null()) {
      os << name << ",,,\n";
      continue;
    }
    os << name << "," << Fixed(t["t"]) << "," << Fixed(t["p"]) << "," << Fixed(t["n"]) << "\n";
  }
  return os.str();
}

}  // namespace ptm
