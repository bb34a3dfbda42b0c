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

#include "ptm/service/scripted_backend.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "ptm/base/error.h"
#include "ptm/base/hash.h"
#include "ptm/base/json.h"
#include "ptm/base/text.h"
#include "ptm/eval/vocabulary.h"

namespace ptm {
namespace {

constexpr std::string_view kRefusal = "I cannot answer this based on the provided context.";

std::string Capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string EndSentence(std::string s) {
  s = Trim(s);
  if (!s.empty() && s.back() != '.' && s.back() != '!' && s.back() != '?') s += '.';
  return s;
}

// First-person journal words to the third person the prompts ask for.
std::string ThirdPerson(std::string_view text) {
  static const std::map<std::string, std::string> kSwap = {
      {"I", "the user"}, {"my", "their"}, {"My", "Their"}, {"me", "them"}, {"myself", "themselves"}};
  std::vector<std::string> out;
  for (std::string w : SplitWhitespace(text)) {
    size_t end = w.find_last_not_of(",;:");
    std::string tail = w.substr(end + 1);
    std::string core = w.substr(0, end + 1);
    auto it = kSwap.find(core);
    out.push_back((it == kSwap.end() ? core : it->second) + tail);
  }
  return Join(out, " ");
}

std::vector<std::string> Lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    line = Trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

int LeadingInt(std::string_view s, int fallback) {
  try {
    return std::stoi(std::string(s));
  } catch (...) {
    return fallback;
  }
}

struct Activity {
  std::string what_tail;  // "reviewed notes"
  std::string when, where, who, why, how;
};

std::optional<Activity> ParseActivity(std::string_view sentence, const std::string &weekday) {
  std::string rest(sentence), when_phrase;
  if (size_t c = rest.find(", I "); c != std::string::npos) {
    when_phrase = rest.substr(0, c);
    rest = rest.substr(c + 2);
  }
  if (!StartsWith(rest, "I ")) return std::nullopt;
  Activity a;
  std::string reason;
  if (size_t b = rest.find(" because "); b != std::string::npos) {
    reason = rest.substr(b + 9);
    rest = rest.substr(0, b);
  }
  if (size_t h = reason.find(", "); h != std::string::npos) {
    a.how = ThirdPerson(reason.substr(h + 2));
    reason = reason.substr(0, h);
  }
  a.why = ThirdPerson(reason);
  if (size_t w = rest.find(" with "); w != std::string::npos) {
    a.who = ThirdPerson(rest.substr(w + 6));
    rest = rest.substr(0, w);
  }
  if (size_t at = rest.find(" at "); at != std::string::npos) {
    a.where = ThirdPerson(rest.substr(at + 4));
    rest = rest.substr(0, at);
  }
  a.what_tail = ThirdPerson(rest.substr(2));
  static const std::regex kSpan(R"(From (\d{2}:\d{2}) to (\d{2}:\d{2}))");
  std::smatch m;
  std::string span = when_phrase;
  if (std::regex_search(when_phrase, m, kSpan)) span = m[1].str() + "-" + m[2].str();
  a.when = weekday.empty() ? span : span.empty() ? weekday : weekday + ", " + span;
  return a;
}

// Activities of one journal text, tracking the "Today was <day>" opener.
std::vector<Activity> Activities(std::string_view text) {
  std::vector<Activity> out;
  std::string weekday;
  for (std::string s : SplitSentences(text)) {
    while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?')) s.pop_back();
    if (StartsWith(s, "Today was ")) {
      weekday = Trim(s.substr(10));
      continue;
    }
    if (auto a = ParseActivity(s, weekday)) out.push_back(*a);
  }
  return out;
}

std::string ActivityClause(const Activity &a) {
  std::string s = a.what_tail;
  if (!a.where.empty()) s += " at " + a.where;
  if (!a.who.empty()) s += " with " + a.who;
  return s;
}

std::string Extract(const std::string &prompt) {
  Json infos = Json::array();
  for (const Activity &a : Activities(Between(prompt, "Input text:\n", ""))) {
    infos.push_back(Json{{"WHAT", "The user " + a.what_tail},
                         {"WHEN", a.when},
                         {"WHERE", a.where},
                         {"WHO", a.who},
                         {"WHY", a.why},
                         {"HOW", a.how}});
  }
  return Json{{"informations", infos}}.dump(2);
}

// "[id] WHAT: x | WHEN: y | ... | DATE: d"
struct InstanceRow {
  std::string id;
  std::map<std::string, std::string> fields;
};

std::vector<InstanceRow> InstanceRows(std::string_view text) {
  std::vector<InstanceRow> rows;
  for (const std::string &line : Lines(text)) {
    if (line.empty() || line[0] != '[') continue;
    size_t close = line.find("] ");
    if (close == std::string::npos) continue;
    InstanceRow row{line.substr(1, close - 1), {}};
    std::string rest = line.substr(close + 2);
    size_t start = 0;
    while (start <= rest.size()) {
      size_t bar = rest.find(" | ", start);
      std::string part = rest.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
      if (size_t colon = part.find(": "); colon != std::string::npos)
        row.fields[part.substr(0, colon)] = part.substr(colon + 2);
      else if (size_t bare = part.find(':'); bare != std::string::npos)
        row.fields[part.substr(0, bare)] = "";
      if (bar == std::string::npos) break;
      start = bar + 3;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Patterns(const std::string &prompt) {
  auto rows = InstanceRows(Between(prompt, "CLUSTERED INSTANCES (for analysis):\n", ""));
  std::vector<std::string> order;
  std::map<std::string, std::vector<const InstanceRow *>> groups;
  for (const auto &r : rows) {
    std::string key = r.fields.count("WHAT") ? r.fields.at("WHAT") : "";
    key += "\x1f" + (r.fields.count("WHY") ? r.fields.at("WHY") : "");
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string &a, const std::string &b) {
    return groups[a].size() > groups[b].size();
  });
  if (order.size() > 3) order.resize(3);
  Json out = Json::array();
  for (const std::string &key : order) {
    const auto &members = groups[key];
    const auto &f = members.front()->fields;
    auto get = [&f](const char *k) { return f.count(k) ? f.at(k) : std::string(); };
    std::string tail = get("WHAT");
    if (StartsWith(tail, "The user ")) tail = tail.substr(9);
    std::set<std::string> spans;
    std::vector<std::string> dates;
    Json sources = Json::array();
    for (const InstanceRow *m : members) {
      std::string when = m->fields.count("WHEN") ? m->fields.at("WHEN") : "";
      if (size_t c = when.find(", "); c != std::string::npos) when = when.substr(c + 2);
      if (!when.empty()) spans.insert(when);
      if (m->fields.count("DATE")) dates.push_back(m->fields.at("DATE"));
      sources.push_back(m->id);
    }
    std::sort(dates.begin(), dates.end());
    std::string content = "The user " + tail;
    if (!get("WHERE").empty()) content += " at " + get("WHERE");
    if (!get("WHO").empty()) content += " with " + get("WHO");
    if (!spans.empty()) content += ", usually " + Join({spans.begin(), spans.end()}, " or ");
    if (!get("WHY").empty()) content += ", because " + get("WHY");
    content += ".";
    if (!get("HOW").empty()) content += " The user does this " + get("HOW") + ".";
    if (!dates.empty()) {
      content += " This was observed " + std::to_string(members.size()) + " times between " +
                 dates.front() + " and " + dates.back() + ".";
    }
    std::string title = Capitalize(tail);
    if (!get("WHY").empty()) title += " (" + get("WHY") + ")";
    out.push_back(Json{{"title", title}, {"content", content}, {"source_instances", sources}});
  }
  return out.dump(2);
}

struct Lens {
  const char *title;
  const char *description;
};

const Lens kLenses[3][4] = {
    {{"Routine Analysis", "Which daily routines repeat across the week and when they happen."},
     {"Habit Formation", "Which habits the user keeps steady and the cues that sustain them."},
     {"Trigger-Response Analysis", "What situations start a behavior and how the user responds."},
     {"Schedule Adherence Patterns", "How closely the user's days follow a fixed schedule."}},
    {{"Goal-Setting Strategies", "How the user sets goals and targets for study and life."},
     {"Task Prioritization Logic", "How the user decides which task comes first."},
     {"Planning vs. Reactivity", "When the user plans ahead and when they react to events."},
     {"Reasoning Models", "How the user reasons about effort, time and outcomes."}},
    {{"Core Value Identification", "Which core values show through the user's choices."},
     {"Motivational Drivers", "What deeply motivates the user to keep going."},
     {"Problem-Solving Frameworks", "How the user approaches hard problems."},
     {"Strategic Thinking Patterns", "How the user thinks about long-term strategy."}},
};

std::string Dimensions(const std::string &prompt) {
  int k = std::max(1, LeadingInt(Between(prompt, "Generate exactly ", " dimensions"), 3));
  Json out = Json::object();
  for (int layer = 0; layer < 3; ++layer) {
    Json dims = Json::array();
    for (int i = 0; i < k; ++i) {
      if (i < 4) {
        dims.push_back(Json{{"title", kLenses[layer][i].title},
                            {"description", kLenses[layer][i].description}});
      } else {
        dims.push_back(Json{{"title", "Lens " + std::to_string(i + 1)},
                            {"description", "An additional view on the user's patterns."}});
      }
    }
    out["L" + std::to_string(layer + 2)] = dims;
  }
  return out.dump(2);
}

// Deals the numbered nodes into clusters in a dimension-specific order.
std::string Clusters(const std::string &prompt) {
  std::string dim = Trim(Between(prompt, "- Title: ", "\n"));
  int wanted = LeadingInt(Between(prompt, "Group these nodes into ", " distinct"), 2);
  std::vector<std::pair<uint64_t, int>> keyed;
  for (const std::string &line : Lines(Between(prompt, "SOURCE NODES:\n", ""))) {
    size_t dot = line.find(". ");
    if (dot == std::string::npos) continue;
    int index = LeadingInt(line.substr(0, dot), -1);
    if (index < 0) continue;
    keyed.emplace_back(Fnv1a64(dim + "|" + line.substr(dot + 2)), index);
  }
  std::sort(keyed.begin(), keyed.end());
  int n = static_cast<int>(keyed.size());
  int c = std::max(1, std::min(wanted, n / 2));
  std::vector<Json> members(c, Json::array());
  for (int i = 0; i < n; ++i) members[i % c].push_back(keyed[i].second);
  Json clusters = Json::array();
  for (int k = 0; k < c; ++k) {
    clusters.push_back(Json{{"cluster_label", dim + " facet " + std::to_string(k + 1)},
                            {"node_indices", members[k]}});
  }
  return Json{{"clusters", clusters}}.dump(2);
}

int LayerOfId(const std::string &id) {
  if (id.size() > 1 && id[0] == 'L') return LeadingInt(id.substr(1), 1);
  return LeadingInt(id, 1);
}

std::string Insights(const std::string &prompt) {
  std::string dim = Trim(Between(prompt, "- Title: ", "\n"));
  std::string label = Trim(Between(prompt, "Cluster Label: ", "\n"));
  Json members = ParseJsonOrDie(Between(prompt, "CLUSTER PATTERNS (INPUT):\n", ""), "cluster patterns");
  Json sources = Json::array();
  std::vector<std::string> titles;
  int source_layer = 1;
  for (const Json &m : members) {
    sources.push_back(m.value("id", ""));
    titles.push_back(ToLower(m.value("title", "")));
    source_layer = LayerOfId(m.value("id", ""));
  }
  std::string lead = "Seen through " + dim + ", the user";
  std::string content;
  if (source_layer <= 1) {
    if (titles.size() > 3) titles.resize(3);
    content = lead + " keeps a steady routine that links " + Join(titles, "; ") +
              ". These habits repeat on a regular weekly schedule, and the same triggers start "
              "them again each week.";
  } else if (source_layer == 2) {
    content = lead + " plans ahead and sets clear priorities. The user weighs each goal against "
                     "the time and effort it needs and chooses the tasks that keep long-term "
                     "targets on track.";
  } else {
    static const char *kValues[3][3] = {{"growth", "balance", "connection"},
                                        {"discipline", "curiosity", "family"},
                                        {"responsibility", "health", "friendship"}};
    const auto &v = kValues[Fnv1a64(label) % 3];
    content = lead + " values " + v[0] + ", " + v[1] + " and " + v[2] +
              ". A belief that steady effort builds competence motivates the user, and these "
              "core values guide choices about study, health and relationships.";
  }
  Json node{{"title", label}, {"content", content}, {"source_nodes", sources}};
  return Json::array({node}).dump(2);
}

std::string Questions(const std::string &prompt) {
  std::string text = Between(prompt, "USER'S JOURNAL ENTRIES:\n", "");
  Json out = Json::array();
  bool journal = false;
  for (const std::string &line : Lines(text)) {
    if (line.size() < 13 || line[0] != '[' || line[11] != ']') continue;
    journal = true;
    std::string date = line.substr(1, 10);
    for (const Activity &a : Activities(line.substr(13))) {
      out.push_back(Json{
          {"query", "Where and why did the user do this on " + date + ": " + a.what_tail + "?"},
          {"ground_truth", "On " + date + ", the user " + ActivityClause(a) +
                               (a.why.empty() ? "" : " because " + a.why) + "."}});
    }
  }
  if (!journal) {
    auto sentences = SplitSentences(text);
    if (!sentences.empty()) {
      out.push_back(Json{{"query", "Is this accurate about you: \"" + sentences[0] +
                                       "\"? Please explain what is missing or wrong."},
                         {"ground_truth", EndSentence(sentences[0])}});
    }
  }
  return out.dump(2);
}

size_t Overlap(const std::set<std::string> &a, const std::set<std::string> &b) {
  size_t n = 0;
  for (const auto &w : a) n += b.count(w);
  return n;
}

std::string Labels(const std::string &prompt) {
  auto query = Vocabulary(Between(prompt, "- User Query: ", "\n- Dataset"));
  int n = std::max(1, LeadingInt(Between(prompt, "return exactly ", " unique"), 1));
  std::vector<std::pair<size_t, int>> scored;
  for (const std::string &line : Lines(Between(prompt, "(Labels 0 to n): ", "\n\n## Response"))) {
    size_t colon = line.find(": ");
    if (colon == std::string::npos) continue;
    int id = LeadingInt(line.substr(0, colon), -1);
    if (id >= 0) scored.emplace_back(Overlap(query, Vocabulary(line.substr(colon + 2))), id);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto &a, const auto &b) { return a.first > b.first; });
  Json out = Json::array();
  for (int i = 0; i < n && i < static_cast<int>(scored.size()); ++i) out.push_back(scored[i].second);
  return out.dump();
}

std::string Answer(const std::string &prompt) {
  std::string context = Between(prompt, "Context:\n", "\n\n---\n\nUser Query:\n");
  auto query = Vocabulary(Between(prompt, "User Query:\n", ""));
  std::string best;
  size_t best_score = 0;
  for (const std::string &s : SplitSentences(context)) {
    std::string sentence = s;
    if (size_t colon = sentence.find(": "); colon != std::string::npos && colon < 80)
      sentence = sentence.substr(colon + 2);
    size_t score = Overlap(query, Vocabulary(sentence));
    if (score > best_score) {
      best_score = score;
      best = sentence;
    }
  }
  if (best_score < 2) return std::string(kRefusal);
  return EndSentence(best);
}

std::vector<std::string> AtomicPoints(std::string_view text) {
  static const std::regex kSplit(R"(, | because | with | at )");
  std::vector<std::string> out;
  for (const std::string &s : SplitSentences(text)) {
    std::sregex_token_iterator it(s.begin(), s.end(), kSplit, -1), end;
    for (; it != end; ++it) {
      std::string p = Trim(it->str());
      if (!Vocabulary(p).empty()) out.push_back(p);
    }
  }
  return out;
}

std::string MatchPoints(const std::string &prompt) {
  std::string pred = Between(prompt, "Prediction answer:\n", "\n\nGround Truth answer:");
  std::string gt = Between(prompt, "Ground Truth answer:\n", "\n\nOutput Schema:");
  auto gt_points = AtomicPoints(gt);
  std::vector<std::string> p_points;
  if (pred.find("cannot answer") == std::string::npos) p_points = AtomicPoints(pred);
  std::vector<bool> used(p_points.size(), false);
  Json tp = Json::array(), fn = Json::array(), fp = Json::array();
  for (const std::string &g : gt_points) {
    auto gv = Vocabulary(g);
    int best = -1;
    double best_score = 0;
    for (size_t i = 0; i < p_points.size(); ++i) {
      if (used[i]) continue;
      double s = Jaccard(gv, Vocabulary(p_points[i]));
      if (s > best_score) {
        best_score = s;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0 && best_score >= 0.5) {
      used[best] = true;
      tp.push_back(Json{{"gt_atomic_point", g},
                        {"p_atomic_point", p_points[best]},
                        {"score", std::round(best_score * 100) / 100}});
    } else {
      fn.push_back(Json{{"gt_atomic_point", g}, {"explanation", "Not covered by the prediction."}});
    }
  }
  for (size_t i = 0; i < p_points.size(); ++i) {
    if (used[i]) continue;
    fp.push_back(Json{{"p_atomic_point", p_points[i]},
                      {"gt_atomic_point", ""},
                      {"explanation", "Not supported by the ground truth."},
                      {"score", 1.0}});
  }
  return Json{{"true_positives", tp}, {"false_negatives", fn}, {"false_positives", fp}}.dump(2);
}

std::string Refine(const std::string &prompt) {
  std::string existing =
      Trim(Between(prompt, "EXISTING BEHAVIORAL PATTERN:\n", "\n\nNEW RELATED OBSERVATIONS:"));
  std::string answer = Trim(Between(prompt, "User's answer: ", ""));
  std::string updated = existing;
  if (!answer.empty()) updated += " The user later clarified: " + EndSentence(answer);
  return Json{{"updated_content", updated}}.dump(2);
}

}  // namespace

std::string ScriptedBackend::Complete(const std::string &raw_prompt, double) {
  std::string prompt = raw_prompt;
  const std::string suffix = LlmClient::CorrectiveSuffix();
  if (prompt.size() >= suffix.size() &&
      prompt.compare(prompt.size() - suffix.size(), suffix.size(), suffix) == 0) {
    prompt.resize(prompt.size() - suffix.size());
  }
  auto has = [&prompt](std::string_view anchor) { return prompt.find(anchor) != std::string::npos; };
  if (has("5W1H framework")) return Extract(prompt);
  if (has("SOURCE INSTANCE IDs (from the cluster)")) return Patterns(prompt);
  if (has("SAMPLE LAYER")) return Dimensions(prompt);
  if (has("pattern recognition engine")) return Clusters(prompt);
  if (has("CLUSTER PATTERNS (INPUT)")) return Insights(prompt);
  if (has("EXISTING BEHAVIORAL PATTERN")) return Refine(prompt);
  if (has("USER'S JOURNAL ENTRIES")) return Questions(prompt);
  if (has("Source Material Only")) return Answer(prompt);
  if (has("atomic information points")) return MatchPoints(prompt);
  if (has("Semantic Retrieval Engine")) return Labels(prompt);
  Fail(ErrorCode::kInvalidArgument, "scripted backend does not recognise the prompt");
}

}  // namespace ptm
