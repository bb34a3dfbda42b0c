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

#ifndef PTM_ABSTRACTION_ABSTRACTION_H_
#define PTM_ABSTRACTION_ABSTRACTION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/graph/graph.h"
#include "ptm/llm/llm_client.h"

namespace ptm {

struct AbstractionConfig {
  int sample_size = 50;
  int dims_per_layer = 3;
  // 0 derives max(2, floor(|previous layer| / 5)).
  int clusters_per_dimension = 0;
  uint64_t seed = 42;

  int ClustersFor(size_t previous_layer_size) const;
  void Validate() const;
};

// Uniform sample without replacement of min(sample_size, |nodes|) nodes, in
// draw order.
std::vector<PtmNode> SampleL1(const std::vector<PtmNode> &nodes, const AbstractionConfig &config);

// One GD call producing dims_per_layer dimensions for each of L2, L3, L4.
// Returned dimensions have layer set and empty ids, in L2, L3, L4 order.
std::vector<AnalyticalDimension> GenerateDimensions(LlmClient &client,
                                                    const std::vector<PtmNode> &sample,
                                                    const AbstractionConfig &config);

struct DimensionCluster {
  std::string dimension_id;
  std::string cluster_label;
  std::vector<std::string> member_node_ids;
};

struct DimensionClustering {
  std::vector<DimensionCluster> clusters;
  std::vector<std::string> dropped;
  bool failed = false;
  std::string error;
};

// CD call over the previous layer's titles (never their content).
DimensionClustering ClusterByDimension(LlmClient &client, const std::vector<PtmNode> &previous,
                                       const AnalyticalDimension &dimension,
                                       const AbstractionConfig &config);

struct LayerSynthesis {
  DimensionCluster cluster;
  std::vector<PtmNode> nodes;
  std::vector<std::string> dropped;
  bool failed = false;
  std::string error;
};

// ID call turning one dimension cluster into 1-3 nodes of dimension.layer.
LayerSynthesis SynthesizeLayer(LlmClient &client, const DimensionCluster &cluster,
                               const std::vector<PtmNode> &members,
                               const AnalyticalDimension &dimension);

struct LayerReport {
  Layer layer = Layer::kL2;
  std::vector<DimensionClustering> clusterings;  // one per dimension
  std::vector<LayerSynthesis> syntheses;
  int node_count = 0;
};

struct Phase2Report {
  std::vector<std::string> sample_ids;
  std::vector<AnalyticalDimension> dimensions;
  std::vector<LayerReport> layers;
};

// Receives each intermediate snapshot (one per layer) so callers can persist
// progress before the next layer runs.
using SnapshotSink = std::function<void(const LayeredGraph &)>;

// Builds L2, L3 and L4 in order. The first snapshot adds all dimensions and
// the L2 nodes; each later layer is its own snapshot; the last one sets
// phase full_built. A layer with no nodes throws kFailedPrecondition after
// earlier snapshots have been handed to `sink`.
LayeredGraph BuildHigherLayers(const LayeredGraph &graph, LlmClient &client,
                               const AbstractionConfig &config,
                               const std::string &generated_at = "",
                               const SnapshotSink &sink = nullptr,
                               Phase2Report *report = nullptr);

// {"L2": [{title, description}], "L3": [...], "L4": [...]}
Json DimensionsToJson(const LayeredGraph &graph);

}  // namespace ptm

#endif  // PTM_ABSTRACTION_ABSTRACTION_H_
