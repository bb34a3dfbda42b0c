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

#include "ptm/graph/node_reply.h"

#include "ptm/base/text.h"

namespace ptm {

NodeReply ParseNodeReply(const Json &reply, const std::string &source_key,
                         const std::set<std::string> &allowed, Layer layer,
                         const std::optional<std::string> &dimension_id, size_t max_nodes) {
  NodeReply out;
  for (size_t i = 0; i < reply.size(); ++i) {
    std::string tag = "item " + std::to_string(i) + ": ";
    if (i >= max_nodes) {
      out.dropped.push_back(tag + "beyond the limit of " + std::to_string(max_nodes));
      continue;
    }
    const Json &item = reply[i];
    if (!item.is_object()) {
      out.dropped.push_back(tag + "not an object");
      continue;
    }
    PtmNode node;
    node.layer = layer;
    node.dimension_id = dimension_id;
    if (item.contains("title") && item["title"].is_string()) node.title = Trim(item["title"].get<std::string>());
    if (item.contains("content") && item["content"].is_string()) {
      node.content = Trim(item["content"].get<std::string>());
    }
    if (node.title.empty() || node.content.empty()) {
      out.dropped.push_back(tag + "empty title or content");
      continue;
    }
    auto src = item.find(source_key);
    if (src == item.end() || !src->is_array() || src->empty()) {
      out.dropped.push_back(tag + "no " + source_key);
      continue;
    }
    std::set<std::string> seen;
    std::string outside;
    for (const Json &s : *src) {
      std::string id = s.is_string() ? s.get<std::string>() : s.dump();
      if (!allowed.count(id)) {
        outside = id;
        break;
      }
      if (seen.insert(id).second) node.source_ids.push_back(id);
    }
    if (!outside.empty()) {
      out.dropped.push_back(tag + "cites " + outside + " outside the cluster");
      continue;
    }
    out.nodes.push_back(std::move(node));
  }
  return out;
}

std::optional<std::string> CheckNodeArray(const Json &reply) {
  if (!reply.is_array()) return "expected a JSON array";
  if (reply.empty()) return "empty array";
  for (const Json &item : reply) {
    if (!item.is_object()) return "array items must be objects";
  }
  return std::nullopt;
}

}  // namespace ptm
