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

#ifndef PTM_GRAPH_GRAPH_H_
#define PTM_GRAPH_GRAPH_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptm/graph/types.h"

namespace ptm {

// A batch of changes applied as one snapshot bump.
struct GraphEdit {
  struct ContentUpdate {
    std::string node_id;
    std::string content;
    std::string feedback_id;
    std::string timestamp;
  };

  std::vector<BehavioralInstance> instances;
  std::vector<AnalyticalDimension> dimensions;
  std::vector<PtmNode> nodes;
  std::vector<ContentUpdate> revisions;
  std::optional<PhaseState> phase_state;
  std::optional<std::string> generated_at;
};

struct InDegreeStats {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
  int total_links = 0;
  int min = 0;
  int max = 0;
};

// Immutable snapshot of one user's layered graph. Every mutation goes through
// Apply(), which validates the edit against the current snapshot and returns
// the next one with version + 1; the receiver is left untouched.
//
// Invariants held by every snapshot:
//   - PtmNode sources are non-empty and all live exactly one layer below.
//   - L1 nodes carry no dimension; L2..L4 nodes reference a dimension of the
//     same layer.
//   - Ids are unique across instances, nodes and dimensions.
// Acyclicity follows from the strict layer adjacency of edges.
class LayeredGraph {
 public:
  LayeredGraph() = default;
  explicit LayeredGraph(std::string user_id) : user_id_(std::move(user_id)) {}

  const std::string &user_id() const { return user_id_; }
  int version() const { return version_; }
  PhaseState phase_state() const { return phase_state_; }
  const std::string &generated_at() const { return generated_at_; }

  const std::map<std::string, BehavioralInstance> &instances() const { return instances_; }
  const std::map<std::string, PtmNode> &nodes() const { return nodes_; }
  const std::map<std::string, AnalyticalDimension> &dimensions() const { return dimensions_; }

  bool Contains(std::string_view id) const;
  std::optional<Layer> LayerOf(std::string_view id) const;
  const PtmNode &node(std::string_view id) const;              // kNotFound
  const BehavioralInstance &instance(std::string_view id) const;  // kNotFound
  const AnalyticalDimension &dimension(std::string_view id) const;

  // Nodes of one layer in natural id order (L1_Node_2 before L1_Node_10).
  std::vector<const PtmNode *> NodesAt(Layer layer) const;
  // Instances ordered by (date, natural id).
  std::vector<const BehavioralInstance *> InstancesByDate() const;
  std::vector<const AnalyticalDimension *> DimensionsAt(Layer layer) const;
  size_t CountAt(Layer layer) const;

  LayeredGraph Apply(const GraphEdit &edit) const;

  // Fills empty ids with "L{n}_Node_{k}", continuing after the largest k in
  // the graph for that layer.
  void AssignNodeIds(std::vector<PtmNode> &nodes) const;
  void AssignDimensionIds(std::vector<AnalyticalDimension> &dims) const;

  // Used by deserialization only; bypasses edit validation of the version.
  static LayeredGraph Restore(std::string user_id, int version, PhaseState state,
                              std::string generated_at,
                              std::vector<BehavioralInstance> instances,
                              std::vector<AnalyticalDimension> dimensions,
                              std::vector<PtmNode> nodes);

 private:
  std::string user_id_;
  int version_ = 0;
  PhaseState phase_state_ = PhaseState::kIngested;
  std::string generated_at_;
  std::map<std::string, BehavioralInstance> instances_;
  std::map<std::string, PtmNode> nodes_;
  std::map<std::string, AnalyticalDimension> dimensions_;
};

// Natural ordering of ids: digit runs compare numerically.
bool NaturalLess(std::string_view a, std::string_view b);

// Inserts synthesized nodes as one new snapshot.
LayeredGraph PutNodes(const LayeredGraph &graph, std::vector<PtmNode> nodes);

// In-degree of upper-layer nodes from the adjacent lower layer. Throws
// kInvalidArgument when the pair is not adjacent L1->L2, L2->L3 or L3->L4.
InDegreeStats ComputeInDegree(const LayeredGraph &graph, Layer lower, Layer upper);

// Transitive closure of source links down to L0, deduplicated and ordered by
// (date, id). An L0 id yields itself.
std::vector<BehavioralInstance> TraceToEvidence(const LayeredGraph &graph,
                                                std::string_view id);

// Structural audit used by tests and run reports.
struct StructureAudit {
  int non_adjacent_edges = 0;
  int dangling_edges = 0;
  int untraceable_nodes = 0;
  int dimension_mismatches = 0;
  bool acyclic = true;
};
StructureAudit AuditStructure(const LayeredGraph &graph);

}  // namespace ptm

#endif  // PTM_GRAPH_GRAPH_H_
