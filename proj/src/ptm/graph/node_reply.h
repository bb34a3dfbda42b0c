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

#ifndef PTM_GRAPH_NODE_REPLY_H_
#define PTM_GRAPH_NODE_REPLY_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/graph/types.h"

namespace ptm {

struct NodeReply {
  std::vector<PtmNode> nodes;       // ids left empty
  std::vector<std::string> dropped;  // one reason per rejected object
};

// Reads a synthesis reply: an array of {"title", "content", <source_key>}.
// Only the first `max_nodes` objects are considered. Objects with an empty
// title or content, no sources, or a source outside `allowed` are dropped.
// Repeated sources within one object are collapsed.
NodeReply ParseNodeReply(const Json &reply, const std::string &source_key,
                         const std::set<std::string> &allowed, Layer layer,
                         const std::optional<std::string> &dimension_id, size_t max_nodes = 3);

// Validator for SendJson: a non-empty array of objects.
std::optional<std::string> CheckNodeArray(const Json &reply);

}  // namespace ptm

#endif  // PTM_GRAPH_NODE_REPLY_H_
