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

#include "ptm/graph/graph.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "ptm/base/error.h"
#include "ptm/base/text.h"

namespace ptm {

std::string_view LayerName(Layer layer) {
  static constexpr std::string_view kNames[] = {"L0", "L1", "L2", "L3", "L4"};
  return kNames[LayerIndex(layer)];
}

Layer ParseLayer(std::string_view name) {
  if (name.size() == 2 && (name[0] == 'L' || name[0] == 'l') && name[1] >= '0' &&
      name[1] <= '4') {
    return LayerFromIndex(name[1] - '0');
  }
  Fail(ErrorCode::kInvalidArgument, "unknown layer: " + std::string(name));
}

std::string_view PhaseStateName(PhaseState state) {
  switch (state) {
    case PhaseState::kIngested: return "ingested";
    case PhaseState::kL1Built: return "l1_built";
    case PhaseState::kFullBuilt: return "full_built";
    case PhaseState::kRefined: return "refined";
  }
  return "ingested";
}

PhaseState ParsePhaseState(std::string_view name) {
  if (name == "ingested") return PhaseState::kIngested;
  if (name == "l1_built") return PhaseState::kL1Built;
  if (name == "full_built") return PhaseState::kFullBuilt;
  if (name == "refined") return PhaseState::kRefined;
  Fail(ErrorCode::kInvalidArgument, "unknown phase state: " + std::string(name));
}

bool NaturalLess(std::string_view a, std::string_view b) {
  size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na[0] == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb[0] == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

bool LayeredGraph::Contains(std::string_view id) const {
  std::string key(id);
  return instances_.count(key) || nodes_.count(key) || dimensions_.count(key);
}

std::optional<Layer> LayeredGraph::LayerOf(std::string_view id) const {
  std::string key(id);
  if (instances_.count(key)) return Layer::kL0;
  auto it = nodes_.find(key);
  if (it != nodes_.end()) return it->second.layer;
  return std::nullopt;
}

const PtmNode &LayeredGraph::node(std::string_view id) const {
  auto it = nodes_.find(std::string(id));
  if (it == nodes_.end()) Fail(ErrorCode::kNotFound, "unknown node: " + std::string(id));
  return it->second;
}

const BehavioralInstance &LayeredGraph::instance(std::string_view id) const {
  auto it = instances_.find(std::string(id));
  if (it == instances_.end()) {
    Fail(ErrorCode::kNotFound, "unknown instance: " + std::string(id));
  }
  return it->second;
}

const AnalyticalDimension &LayeredGraph::dimension(std::string_view id) const {
  auto it = dimensions_.find(std::string(id));
  if (it == dimensions_.end()) {
    Fail(ErrorCode::kNotFound, "unknown dimension: " + std::string(id));
  }
  return it->second;
}

std::vector<const PtmNode *> LayeredGraph::NodesAt(Layer layer) const {
  std::vector<const PtmNode *> out;
  for (const auto &[id, n] : nodes_) {
    if (n.layer == layer) out.push_back(&n);
  }
  std::sort(out.begin(), out.end(),
            [](const PtmNode *a, const PtmNode *b) { return NaturalLess(a->id, b->id); });
  return out;
}

std::vector<const BehavioralInstance *> LayeredGraph::InstancesByDate() const {
  std::vector<const BehavioralInstance *> out;
  for (const auto &[id, x] : instances_) out.push_back(&x);
  std::sort(out.begin(), out.end(), [](const BehavioralInstance *a, const BehavioralInstance *b) {
    if (a->date != b->date) return a->date < b->date;
    return NaturalLess(a->id, b->id);
  });
  return out;
}

std::vector<const AnalyticalDimension *> LayeredGraph::DimensionsAt(Layer layer) const {
  std::vector<const AnalyticalDimension *> out;
  for (const auto &[id, d] : dimensions_) {
    if (d.layer == layer) out.push_back(&d);
  }
  std::sort(out.begin(), out.end(), [](const auto *a, const auto *b) {
    return NaturalLess(a->id, b->id);
  });
  return out;
}

size_t LayeredGraph::CountAt(Layer layer) const {
  if (layer == Layer::kL0) return instances_.size();
  size_t n = 0;
  for (const auto &[id, node] : nodes_) n += node.layer == layer;
  return n;
}

namespace {

int MaxSuffix(const std::vector<std::string> &ids, std::string_view prefix) {
  int best = 0;
  for (const auto &id : ids) {
    if (!StartsWith(id, prefix)) continue;
    std::string rest = id.substr(prefix.size());
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit)) continue;
    best = std::max(best, std::stoi(rest));
  }
  return best;
}

}  // namespace

void LayeredGraph::AssignNodeIds(std::vector<PtmNode> &nodes) const {
  std::vector<std::string> ids;
  for (const auto &[id, n] : nodes_) ids.push_back(id);
  for (const auto &n : nodes) {
    if (!n.id.empty()) ids.push_back(n.id);
  }
  for (auto &n : nodes) {
    if (!n.id.empty()) continue;
    std::string prefix = std::string(LayerName(n.layer)) + "_Node_";
    n.id = prefix + std::to_string(MaxSuffix(ids, prefix) + 1);
    ids.push_back(n.id);
  }
}

void LayeredGraph::AssignDimensionIds(std::vector<AnalyticalDimension> &dims) const {
  std::vector<std::string> ids;
  for (const auto &[id, d] : dimensions_) ids.push_back(id);
  for (const auto &d : dims) {
    if (!d.id.empty()) ids.push_back(d.id);
  }
  for (auto &d : dims) {
    if (!d.id.empty()) continue;
    std::string prefix = std::string(LayerName(d.layer)) + "_Dim_";
    d.id = prefix + std::to_string(MaxSuffix(ids, prefix) + 1);
    ids.push_back(d.id);
  }
}

LayeredGraph LayeredGraph::Apply(const GraphEdit &edit) const {
  LayeredGraph next = *this;
  auto claim = [&](const std::string &id, std::string_view what) {
    if (id.empty()) Fail(ErrorCode::kInvalidArgument, std::string(what) + " with empty id");
    if (next.Contains(id)) Fail(ErrorCode::kAlreadyExists, "duplicate id: " + id);
  };

  for (const auto &x : edit.instances) {
    claim(x.id, "instance");
    if (Trim(x.what).empty()) {
      Fail(ErrorCode::kInvalidArgument, "instance " + x.id + " has empty what");
    }
    next.instances_.emplace(x.id, x);
  }

  for (const auto &d : edit.dimensions) {
    claim(d.id, "dimension");
    if (d.layer == Layer::kL0 || d.layer == Layer::kL1) {
      Fail(ErrorCode::kInvalidArgument, "dimension " + d.id + " must target L2..L4");
    }
    if (Trim(d.title).empty()) {
      Fail(ErrorCode::kInvalidArgument, "dimension " + d.id + " has empty title");
    }
    next.dimensions_.emplace(d.id, d);
  }

  // Claim all node ids first so sources may reference nodes of the same batch.
  std::unordered_map<std::string, Layer> batch_layers;
  for (const auto &n : edit.nodes) {
    claim(n.id, "node");
    if (batch_layers.count(n.id)) Fail(ErrorCode::kAlreadyExists, "duplicate id: " + n.id);
    batch_layers.emplace(n.id, n.layer);
  }
  for (const auto &n : edit.nodes) {
    if (n.layer == Layer::kL0) {
      Fail(ErrorCode::kInvalidArgument, "node " + n.id + " cannot be placed at L0");
    }
    if (n.source_ids.empty()) {
      Fail(ErrorCode::kInvalidArgument, "node " + n.id + " has no sources");
    }
    std::vector<std::string> missing, misplaced;
    std::unordered_set<std::string> seen;
    for (const auto &s : n.source_ids) {
      if (!seen.insert(s).second) {
        Fail(ErrorCode::kInvalidArgument, "node " + n.id + " repeats source " + s);
      }
      std::optional<Layer> layer = next.LayerOf(s);
      if (!layer) {
        auto it = batch_layers.find(s);
        if (it != batch_layers.end()) layer = it->second;
      }
      if (!layer) {
        missing.push_back(s);
      } else if (LayerIndex(*layer) + 1 != LayerIndex(n.layer)) {
        misplaced.push_back(s);
      }
    }
    if (!missing.empty()) {
      Fail(ErrorCode::kInvalidArgument, "dangling source: " + Join(missing, ", "),
           "node " + n.id);
    }
    if (!misplaced.empty()) {
      Fail(ErrorCode::kInvalidArgument, "non-adjacent layers: " + Join(misplaced, ", "),
           "node " + n.id + " at " + std::string(LayerName(n.layer)));
    }
    if (n.layer == Layer::kL1) {
      if (n.dimension_id) {
        Fail(ErrorCode::kInvalidArgument, "L1 node " + n.id + " must not have a dimension");
      }
    } else {
      if (!n.dimension_id) {
        Fail(ErrorCode::kInvalidArgument, "node " + n.id + " requires a dimension");
      }
      auto it = next.dimensions_.find(*n.dimension_id);
      if (it == next.dimensions_.end()) {
        Fail(ErrorCode::kInvalidArgument, "unknown dimension: " + *n.dimension_id,
             "node " + n.id);
      }
      if (it->second.layer != n.layer) {
        Fail(ErrorCode::kInvalidArgument,
             "dimension " + *n.dimension_id + " belongs to another layer", "node " + n.id);
      }
    }
  }
  for (const auto &n : edit.nodes) next.nodes_.emplace(n.id, n);

  for (const auto &u : edit.revisions) {
    auto it = next.nodes_.find(u.node_id);
    if (it == next.nodes_.end()) Fail(ErrorCode::kNotFound, "unknown node: " + u.node_id);
    PtmNode &n = it->second;
    n.revisions.push_back(Revision{u.timestamp, n.content, u.feedback_id, u.content});
    n.content = u.content;
  }

  if (edit.phase_state) next.phase_state_ = *edit.phase_state;
  if (edit.generated_at) next.generated_at_ = *edit.generated_at;
  next.version_ = version_ + 1;
  return next;
}

LayeredGraph LayeredGraph::Restore(std::string user_id, int version, PhaseState state,
                                   std::string generated_at,
                                   std::vector<BehavioralInstance> instances,
                                   std::vector<AnalyticalDimension> dimensions,
                                   std::vector<PtmNode> nodes) {
  // Revisions are part of the stored nodes; replay them through Apply's
  // structural checks with revision lists carried as-is.
  LayeredGraph empty(user_id);
  GraphEdit edit;
  edit.instances = std::move(instances);
  edit.dimensions = std::move(dimensions);
  edit.nodes = std::move(nodes);
  edit.phase_state = state;
  edit.generated_at = std::move(generated_at);
  LayeredGraph g = empty.Apply(edit);
  g.version_ = version;
  return g;
}

LayeredGraph PutNodes(const LayeredGraph &graph, std::vector<PtmNode> nodes) {
  GraphEdit edit;
  edit.nodes = std::move(nodes);
  return graph.Apply(edit);
}

InDegreeStats ComputeInDegree(const LayeredGraph &graph, Layer lower, Layer upper) {
  if (LayerIndex(lower) < 1 || LayerIndex(upper) != LayerIndex(lower) + 1) {
    Fail(ErrorCode::kInvalidArgument, "in-degree pair must be adjacent L1..L4: " +
                                          std::string(LayerName(lower)) + "->" +
                                          std::string(LayerName(upper)));
  }
  auto nodes = graph.NodesAt(upper);
  InDegreeStats s;
  if (nodes.empty()) return s;
  std::vector<int> deg;
  for (const auto *n : nodes) deg.push_back(static_cast<int>(n->source_ids.size()));
  for (int d : deg) s.total_links += d;
  s.min = *std::min_element(deg.begin(), deg.end());
  s.max = *std::max_element(deg.begin(), deg.end());
  s.mean = static_cast<double>(s.total_links) / deg.size();
  double ss = 0;
  for (int d : deg) ss += (d - s.mean) * (d - s.mean);
  s.sd = std::sqrt(ss / deg.size());
  return s;
}

std::vector<BehavioralInstance> TraceToEvidence(const LayeredGraph &graph,
                                                std::string_view id) {
  std::string key(id);
  if (graph.instances().count(key)) return {graph.instance(key)};
  if (!graph.nodes().count(key)) Fail(ErrorCode::kNotFound, "unknown node: " + key);
  std::set<std::string> visited;
  std::set<std::string> found;
  std::vector<std::string> stack = {key};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    if (!visited.insert(cur).second) continue;
    if (graph.instances().count(cur)) {
      found.insert(cur);
      continue;
    }
    auto it = graph.nodes().find(cur);
    if (it == graph.nodes().end()) continue;
    for (const auto &s : it->second.source_ids) stack.push_back(s);
  }
  std::vector<BehavioralInstance> out;
  for (const auto &f : found) out.push_back(graph.instance(f));
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.date != b.date) return a.date < b.date;
    return NaturalLess(a.id, b.id);
  });
  return out;
}

StructureAudit AuditStructure(const LayeredGraph &graph) {
  StructureAudit audit;
  for (const auto &[id, n] : graph.nodes()) {
    for (const auto &s : n.source_ids) {
      auto layer = graph.LayerOf(s);
      if (!layer) {
        ++audit.dangling_edges;
      } else if (LayerIndex(*layer) + 1 != LayerIndex(n.layer)) {
        ++audit.non_adjacent_edges;
      }
    }
    if (n.layer != Layer::kL1) {
      auto it = n.dimension_id ? graph.dimensions().find(*n.dimension_id)
                               : graph.dimensions().end();
      if (it == graph.dimensions().end() || it->second.layer != n.layer) {
        ++audit.dimension_mismatches;
      }
    } else if (n.dimension_id) {
      ++audit.dimension_mismatches;
    }
    if (TraceToEvidence(graph, id).empty()) ++audit.untraceable_nodes;
  }
  // Three-colour DFS over source links.
  std::unordered_map<std::string, int> colour;
  std::function<bool(const std::string &)> dfs = [&](const std::string &u) {
    colour[u] = 1;
    auto it = graph.nodes().find(u);
    if (it != graph.nodes().end()) {
      for (const auto &s : it->second.source_ids) {
        int c = colour[s];
        if (c == 1) return false;
        if (c == 0 && !dfs(s)) return false;
      }
    }
    colour[u] = 2;
    return true;
  };
  for (const auto &[id, n] : graph.nodes()) {
    if (colour[id] == 0 && !dfs(id)) {
      audit.acyclic = false;
      break;
    }
  }
  return audit;
}

}  // namespace ptm
