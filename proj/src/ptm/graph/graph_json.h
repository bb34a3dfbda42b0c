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

#ifndef PTM_GRAPH_GRAPH_JSON_H_
#define PTM_GRAPH_GRAPH_JSON_H_

#include "ptm/base/json.h"
#include "ptm/graph/graph.h"

namespace ptm {

// Export document: {user_id, version, phase_state, generated_at, dimensions,
// nodes}. L1 nodes list their sources as "source_instances", L2..L4 nodes as
// "source_nodes", matching the synthesis prompt schemas.
Json GraphToJson(const LayeredGraph &graph);
LayeredGraph GraphFromJson(const Json &doc);

Json InstanceToJson(const BehavioralInstance &x);
BehavioralInstance InstanceFromJson(const Json &j);
Json NodeToJson(const PtmNode &n);
PtmNode NodeFromJson(const Json &j);
Json DimensionToJson(const AnalyticalDimension &d);
AnalyticalDimension DimensionFromJson(const Json &j);

// Nodes of one layer as export documents (L0 yields instances).
Json LayerToJson(const LayeredGraph &graph, Layer layer);

}  // namespace ptm

#endif  // PTM_GRAPH_GRAPH_JSON_H_
