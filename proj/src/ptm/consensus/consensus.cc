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

#include "ptm/consensus/consensus.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "ptm/base/error.h"
#include "ptm/base/parallel.h"
#include "ptm/consensus/reducer.h"
#include "ptm/graph/node_reply.h"

namespace ptm {

std::string_view AttributeName(Attribute a) {
  switch (a) {
    case Attribute::kWhat: return "what";
    case Attribute::kWhen: return "when";
    case Attribute::kWhere: return "where";
    case Attribute::kWho: return "who";
    case Attribute::kWhy: return "why";
    case Attribute::kHow: return "how";
  }
  return "?";
}

const std::string &AttributeText(const BehavioralInstance &x, Attribute a) {
  switch (a) {
    case Attribute::kWhat: return x.what;
    case Attribute::kWhen: return x.when;
    case Attribute::kWhere: return x.where;
    case Attribute::kWho: return x.who;
    case Attribute::kWhy: return x.why;
    case Attribute::kHow: return x.how;
  }
  return x.what;
}

void ConsensusConfig::Validate() const {
  for (int w : weights) {
    if (w <= 0) Fail(ErrorCode::kInvalidArgument, "attribute weights must be positive");
  }
  if (tau < 1) Fail(ErrorCode::kInvalidArgument, "tau must be >= 1");
  if (reduce_dim < 2) Fail(ErrorCode::kInvalidArgument, "reduce_dim must be >= 2");
  if (same_date_penalty < 0) Fail(ErrorCode::kInvalidArgument, "same_date_penalty must be >= 0");
  if (min_cluster_size < 2) Fail(ErrorCode::kInvalidArgument, "min_cluster_size must be >= 2");
}

AttributeAssignment BaseCluster(const std::vector<BehavioralInstance> &instances,
                                Attribute attribute, EmbeddingProvider &provider,
                                const ConsensusConfig &config) {
  AttributeAssignment out;
  out.attribute = attribute;
  std::vector<std::string> texts;
  texts.reserve(instances.size());
  for (const auto &x : instances) texts.push_back(AttributeText(x, attribute));
  std::vector<Vector> points = provider.Embed(texts);
  if (points.size() != instances.size()) {
    Fail(ErrorCode::kInternal, "embedding provider returned wrong count");
  }
  out.reduced = points.size() >= static_cast<size_t>(config.reduce_dim);
  if (out.reduced) points = PcaReduce(points, config.reduce_dim);

  const size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = Euclidean(points[i], points[j]);
  }
  std::vector<int> labels = Hdbscan(d, n, {config.min_cluster_size, config.min_samples});
  for (size_t i = 0; i < n; ++i) out.labels[instances[i].id] = labels[i];
  return out;
}

ConsensusMatrix BuildConsensus(const std::vector<AttributeAssignment> &assignments,
                               const std::map<std::string, Date> &dates,
                               const ConsensusConfig &config) {
  std::array<const AttributeAssignment *, 6> by_attr{};
  for (const auto &a : assignments) {
    auto &slot = by_attr[static_cast<size_t>(a.attribute)];
    if (slot) {
      Fail(ErrorCode::kInvalidArgument,
           "duplicate assignment for attribute " + std::string(AttributeName(a.attribute)));
    }
    slot = &a;
  }
  for (Attribute a : kAttributes) {
    if (!by_attr[static_cast<size_t>(a)]) {
      Fail(ErrorCode::kInvalidArgument,
           "missing assignment for attribute " + std::string(AttributeName(a)));
    }
  }

  ConsensusMatrix m;
  for (const auto &[id, date] : dates) m.ids.push_back(id);
  std::sort(m.ids.begin(), m.ids.end(), NaturalLess);
  const size_t n = m.ids.size();
  for (const auto &id : m.ids) m.dates.push_back(dates.at(id));

  // Labels gathered into one row per attribute.
  std::array<std::vector<int>, 6> labels;
  for (Attribute a : kAttributes) {
    const auto &assign = *by_attr[static_cast<size_t>(a)];
    auto &row = labels[static_cast<size_t>(a)];
    row.reserve(n);
    for (const auto &id : m.ids) {
      auto it = assign.labels.find(id);
      if (it == assign.labels.end()) {
        Fail(ErrorCode::kInvalidArgument,
             "instance " + id + " missing from attribute " + std::string(AttributeName(a)));
      }
      row.push_back(it->second);
    }
  }

  m.raw.assign(n * n, 0);
  m.penalty.assign(n * n, 0);
  m.score.assign(n * n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      int r = 0;
      for (Attribute a : kAttributes) {
        const auto &row = labels[static_cast<size_t>(a)];
        if (row[i] != kNoise && row[i] == row[j]) r += config.weight(a);
      }
      int p = m.dates[i] == m.dates[j] ? config.same_date_penalty : 0;
      m.raw[i * n + j] = m.raw[j * n + i] = r;
      m.penalty[i * n + j] = m.penalty[j * n + i] = p;
      m.score[i * n + j] = m.score[j * n + i] = r - p;
    }
  }
  return m;
}

ClusterSet FormClusters(const ConsensusMatrix &matrix, int tau) {
  const size_t n = matrix.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (matrix.s(i, j) >= tau) {
        size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<size_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  auto before = [&](size_t a, size_t b) {
    if (matrix.dates[a] != matrix.dates[b]) return matrix.dates[a] < matrix.dates[b];
    return NaturalLess(matrix.ids[a], matrix.ids[b]);
  };
  std::vector<std::vector<size_t>> clusters;
  std::vector<size_t> singles;
  for (auto &[root, members] : groups) {
    if (members.size() < 2) {
      singles.push_back(members[0]);
      continue;
    }
    std::sort(members.begin(), members.end(), before);
    clusters.push_back(members);
  }
  std::sort(clusters.begin(), clusters.end(),
            [&](const auto &a, const auto &b) { return before(a[0], b[0]); });
  std::sort(singles.begin(), singles.end(), before);

  ClusterSet out;
  for (const auto &c : clusters) {
    std::vector<std::string> ids;
    for (size_t i : c) ids.push_back(matrix.ids[i]);
    out.clusters.push_back(std::move(ids));
  }
  for (size_t i : singles) out.unclustered.push_back(matrix.ids[i]);
  return out;
}

std::string ConsensusCsv(const ConsensusMatrix &matrix) {
  std::ostringstream os;
  const size_t n = matrix.size();
  auto section = [&](const char *name, const std::vector<int> &values) {
    os << name << "\n";
    for (const auto &id : matrix.ids) os << "," << id;
    os << "\n";
    for (size_t i = 0; i < n; ++i) {
      os << matrix.ids[i];
      for (size_t j = 0; j < n; ++j) os << "," << values[i * n + j];
      os << "\n";
    }
  };
  section("R", matrix.raw);
  os << "\n";
  section("P", matrix.penalty);
  os << "\n";
  section("S", matrix.score);
  return os.str();
}

std::string FormatInstancesForPrompt(const std::vector<BehavioralInstance> &instances) {
  std::ostringstream os;
  for (const auto &x : instances) {
    os << "[" << x.id << "] WHAT: " << x.what << " | WHEN: " << x.when << " | WHERE: " << x.where
       << " | WHO: " << x.who << " | WHY: " << x.why << " | HOW: " << x.how
       << " | DATE: " << x.date.ToString() << "\n";
  }
  return os.str();
}

L1Synthesis SynthesizeL1(LlmClient &client, const std::vector<BehavioralInstance> &cluster) {
  L1Synthesis out;
  Json ids = Json::array();
  std::set<std::string> allowed;
  for (const auto &x : cluster) {
    out.cluster.push_back(x.id);
    ids.push_back(x.id);
    allowed.insert(x.id);
  }
  LlmRequest req{"IO",
                 {{"instance_ids_json", ids.dump()},
                  {"instances_text", FormatInstancesForPrompt(cluster)}},
                 0.0,
                 ResponseShape::kArray};
  try {
    Json reply = client.SendJson(req, CheckNodeArray);
    NodeReply parsed = ParseNodeReply(reply, "source_instances", allowed, Layer::kL1, std::nullopt);
    out.nodes = std::move(parsed.nodes);
    out.dropped = std::move(parsed.dropped);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kParse) throw;
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

LayeredGraph BuildL1(const LayeredGraph &graph, LlmClient &client, EmbeddingProvider &provider,
                     const ConsensusConfig &config, const std::string &generated_at,
                     Phase1Report *report) {
  config.Validate();
  if (graph.CountAt(Layer::kL1) > 0) {
    Fail(ErrorCode::kFailedPrecondition, "L1 already built for user " + graph.user_id());
  }
  std::vector<BehavioralInstance> instances;
  std::map<std::string, Date> dates;
  for (const auto *x : graph.InstancesByDate()) {
    instances.push_back(*x);
    dates[x->id] = x->date;
  }
  if (instances.size() < 2) {
    Fail(ErrorCode::kFailedPrecondition, "pattern discovery needs at least 2 instances");
  }

  Phase1Report local;
  Phase1Report &rep = report ? *report : local;
  rep.assignments = BoundedParallelMap<AttributeAssignment>(
      kAttributes.size(), static_cast<int>(kAttributes.size()),
      [&](size_t i) { return BaseCluster(instances, kAttributes[i], provider, config); });
  rep.matrix = BuildConsensus(rep.assignments, dates, config);
  rep.clusters = FormClusters(rep.matrix, config.tau);

  std::map<std::string, const BehavioralInstance *> by_id;
  for (const auto &x : instances) by_id[x.id] = &x;
  rep.syntheses = BoundedParallelMap<L1Synthesis>(
      rep.clusters.clusters.size(), client.max_in_flight(), [&](size_t c) {
        std::vector<BehavioralInstance> members;
        for (const auto &id : rep.clusters.clusters[c]) members.push_back(*by_id.at(id));
        return SynthesizeL1(client, members);
      });

  GraphEdit edit;
  for (const auto &s : rep.syntheses) {
    for (const auto &node : s.nodes) edit.nodes.push_back(node);
  }
  if (edit.nodes.empty()) {
    Fail(ErrorCode::kFailedPrecondition,
         "pattern discovery produced no L1 nodes (" + std::to_string(rep.clusters.clusters.size()) +
             " clusters)");
  }
  graph.AssignNodeIds(edit.nodes);
  edit.phase_state = PhaseState::kL1Built;
  if (!generated_at.empty()) edit.generated_at = generated_at;
  return graph.Apply(edit);
}

}  // namespace ptm
