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

#include "ptm/abstraction/abstraction.h"

#include <set>
#include <sstream>

#include "ptm/base/error.h"
#include "ptm/base/parallel.h"
#include "ptm/base/random.h"
#include "ptm/base/text.h"
#include "ptm/graph/node_reply.h"

namespace ptm {

namespace {

constexpr Layer kUpperLayers[] = {Layer::kL2, Layer::kL3, Layer::kL4};

std::string FormatSample(const std::vector<PtmNode> &sample) {
  std::ostringstream os;
  for (size_t i = 0; i < sample.size(); ++i) {
    os << i + 1 << ". " << sample[i].title << ": " << sample[i].content << "\n";
  }
  return os.str();
}

std::string FormatTitles(const std::vector<PtmNode> &nodes) {
  std::ostringstream os;
  for (size_t i = 0; i < nodes.size(); ++i) os << i + 1 << ". " << nodes[i].title << "\n";
  return os.str();
}

bool ParseError(const Error &e) { return e.code() == ErrorCode::kParse; }

}  // namespace

int AbstractionConfig::ClustersFor(size_t previous_layer_size) const {
  if (clusters_per_dimension > 0) return clusters_per_dimension;
  return std::max(2, static_cast<int>(previous_layer_size / 5));
}

void AbstractionConfig::Validate() const {
  if (sample_size < 1) Fail(ErrorCode::kInvalidArgument, "sample_size must be >= 1");
  if (dims_per_layer < 1) Fail(ErrorCode::kInvalidArgument, "dims_per_layer must be >= 1");
  if (clusters_per_dimension < 0) {
    Fail(ErrorCode::kInvalidArgument, "clusters_per_dimension must be >= 0");
  }
}

std::vector<PtmNode> SampleL1(const std::vector<PtmNode> &nodes, const AbstractionConfig &config) {
  SeededRng rng(config.seed);
  std::vector<PtmNode> out;
  for (size_t i : rng.Sample(nodes.size(), static_cast<size_t>(std::max(0, config.sample_size)))) {
    out.push_back(nodes[i]);
  }
  return out;
}

std::vector<AnalyticalDimension> GenerateDimensions(LlmClient &client,
                                                    const std::vector<PtmNode> &sample,
                                                    const AbstractionConfig &config) {
  if (sample.empty()) Fail(ErrorCode::kFailedPrecondition, "dimension generation needs a sample");
  const size_t k = static_cast<size_t>(config.dims_per_layer);
  LlmRequest req{"GD",
                 {{"layer_number", "1"},
                  {"num_dimensions", std::to_string(k)},
                  {"sampled_nodes_text", FormatSample(sample)}},
                 0.0,
                 ResponseShape::kObject};
  Json reply = client.SendJson(req, [k](const Json &j) -> std::optional<std::string> {
    if (!j.is_object()) return "expected a JSON object";
    for (Layer layer : kUpperLayers) {
      std::string key(LayerName(layer));
      if (!j.contains(key) || !j[key].is_array()) return "missing key " + key;
      if (j[key].size() != k) {
        return key + " has " + std::to_string(j[key].size()) + " dimensions, expected " +
               std::to_string(k);
      }
      for (const Json &d : j[key]) {
        if (!d.is_object() || !d.contains("title") || !d["title"].is_string() ||
            Trim(d["title"].get<std::string>()).empty()) {
          return key + " dimension without a title";
        }
      }
    }
    return std::nullopt;
  });
  std::vector<AnalyticalDimension> out;
  for (Layer layer : kUpperLayers) {
    for (const Json &d : reply[std::string(LayerName(layer))]) {
      AnalyticalDimension dim;
      dim.layer = layer;
      dim.title = Trim(d["title"].get<std::string>());
      if (d.contains("description") && d["description"].is_string()) {
        dim.description = Trim(d["description"].get<std::string>());
      }
      out.push_back(std::move(dim));
    }
  }
  return out;
}

DimensionClustering ClusterByDimension(LlmClient &client, const std::vector<PtmNode> &previous,
                                       const AnalyticalDimension &dimension,
                                       const AbstractionConfig &config) {
  for (const auto &n : previous) {
    if (LayerIndex(n.layer) + 1 != LayerIndex(dimension.layer)) {
      Fail(ErrorCode::kInvalidArgument, "node " + n.id + " is not one layer below dimension " +
                                            dimension.id);
    }
  }
  DimensionClustering out;
  LlmRequest req{"CD",
                 {{"dimension_title", dimension.title},
                  {"dimension_description", dimension.description},
                  {"num_clusters", std::to_string(config.ClustersFor(previous.size()))},
                  {"numbered_nodes_text", FormatTitles(previous)}},
                 0.0,
                 ResponseShape::kObject};
  Json reply;
  try {
    reply = client.SendJson(req, [](const Json &j) -> std::optional<std::string> {
      if (!j.is_object() || !j.contains("clusters") || !j["clusters"].is_array()) {
        return "expected an object with a clusters array";
      }
      return std::nullopt;
    });
  } catch (const Error &e) {
    if (!ParseError(e)) throw;
    out.failed = true;
    out.error = e.what();
    return out;
  }
  const Json &clusters = reply["clusters"];
  for (size_t c = 0; c < clusters.size(); ++c) {
    const Json &item = clusters[c];
    std::string tag = "cluster " + std::to_string(c) + ": ";
    if (!item.is_object() || !item.contains("node_indices") || !item["node_indices"].is_array()) {
      out.dropped.push_back(tag + "no node_indices");
      continue;
    }
    DimensionCluster dc;
    dc.dimension_id = dimension.id;
    if (item.contains("cluster_label") && item["cluster_label"].is_string()) {
      dc.cluster_label = Trim(item["cluster_label"].get<std::string>());
    }
    std::set<std::string> seen;
    for (const Json &idx : item["node_indices"]) {
      long i = idx.is_number_integer() ? idx.get<long>() : -1;
      if (idx.is_string()) {
        try {
          i = std::stol(idx.get<std::string>());
        } catch (const std::exception &) {
          i = -1;
        }
      }
      if (i < 1 || i > static_cast<long>(previous.size())) {
        out.dropped.push_back(tag + "index " + idx.dump() + " out of range");
        continue;
      }
      const std::string &id = previous[static_cast<size_t>(i - 1)].id;
      if (seen.insert(id).second) dc.member_node_ids.push_back(id);
    }
    if (dc.member_node_ids.size() < 2) {
      out.dropped.push_back(tag + "fewer than two nodes");
      continue;
    }
    out.clusters.push_back(std::move(dc));
  }
  return out;
}

LayerSynthesis SynthesizeLayer(LlmClient &client, const DimensionCluster &cluster,
                               const std::vector<PtmNode> &members,
                               const AnalyticalDimension &dimension) {
  LayerSynthesis out;
  out.cluster = cluster;
  Json records = Json::array();
  std::set<std::string> allowed;
  for (const auto &n : members) {
    records.push_back(Json{{"id", n.id}, {"title", n.title}, {"content", n.content}});
    allowed.insert(n.id);
  }
  LlmRequest req{"ID",
                 {{"dimension_title", dimension.title},
                  {"dimension_description", dimension.description},
                  {"cluster_label", cluster.cluster_label},
                  {"source_nodes_json", records.dump(2)}},
                 0.0,
                 ResponseShape::kArray};
  try {
    Json reply = client.SendJson(req, CheckNodeArray);
    NodeReply parsed = ParseNodeReply(reply, "source_nodes", allowed, dimension.layer, dimension.id);
    out.nodes = std::move(parsed.nodes);
    out.dropped = std::move(parsed.dropped);
  } catch (const Error &e) {
    if (!ParseError(e)) throw;
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

LayeredGraph BuildHigherLayers(const LayeredGraph &graph, LlmClient &client,
                               const AbstractionConfig &config, const std::string &generated_at,
                               const SnapshotSink &sink, Phase2Report *report) {
  config.Validate();
  if (graph.phase_state() != PhaseState::kL1Built) {
    Fail(ErrorCode::kFailedPrecondition,
         "higher layers need phase l1_built, graph is " +
             std::string(PhaseStateName(graph.phase_state())));
  }
  std::vector<PtmNode> l1;
  for (const auto *n : graph.NodesAt(Layer::kL1)) l1.push_back(*n);
  if (l1.empty()) Fail(ErrorCode::kFailedPrecondition, "no L1 nodes to abstract");

  Phase2Report local;
  Phase2Report &rep = report ? *report : local;
  std::vector<PtmNode> sample = SampleL1(l1, config);
  for (const auto &n : sample) rep.sample_ids.push_back(n.id);
  std::vector<AnalyticalDimension> dims = GenerateDimensions(client, sample, config);

  LayeredGraph current = graph;
  GraphEdit edit;
  for (Layer layer : kUpperLayers) {
    std::vector<AnalyticalDimension> layer_dims;
    for (const auto &d : dims) {
      if (d.layer == layer) layer_dims.push_back(d);
    }
    current.AssignDimensionIds(layer_dims);
    for (const auto &d : layer_dims) edit.dimensions.push_back(d);
  }
  rep.dimensions = edit.dimensions;

  for (Layer layer : kUpperLayers) {
    Layer below = LayerFromIndex(LayerIndex(layer) - 1);
    std::vector<PtmNode> previous;
    if (below == Layer::kL1) {
      previous = l1;
    } else {
      for (const auto *n : current.NodesAt(below)) previous.push_back(*n);
    }
    std::map<std::string, const PtmNode *> by_id;
    for (const auto &n : previous) by_id[n.id] = &n;
    std::vector<AnalyticalDimension> layer_dims;
    for (const auto &d : edit.dimensions) {
      if (d.layer == layer) layer_dims.push_back(d);
    }
    for (const auto *d : current.DimensionsAt(layer)) layer_dims.push_back(*d);

    LayerReport lr;
    lr.layer = layer;
    struct DimensionWork {
      DimensionClustering clustering;
      std::vector<LayerSynthesis> syntheses;
    };
    auto work = BoundedParallelMap<DimensionWork>(
        layer_dims.size(), client.max_in_flight(), [&](size_t i) {
          DimensionWork w;
          w.clustering = ClusterByDimension(client, previous, layer_dims[i], config);
          for (const auto &c : w.clustering.clusters) {
            std::vector<PtmNode> members;
            for (const auto &id : c.member_node_ids) members.push_back(*by_id.at(id));
            w.syntheses.push_back(SynthesizeLayer(client, c, members, layer_dims[i]));
          }
          return w;
        });
    for (auto &w : work) {
      for (auto &s : w.syntheses) {
        for (const auto &n : s.nodes) edit.nodes.push_back(n);
        lr.syntheses.push_back(std::move(s));
      }
      lr.clusterings.push_back(std::move(w.clustering));
    }
    current.AssignNodeIds(edit.nodes);
    lr.node_count = static_cast<int>(edit.nodes.size());
    rep.layers.push_back(std::move(lr));
    if (edit.nodes.empty()) {
      Fail(ErrorCode::kFailedPrecondition,
           "layer " + std::string(LayerName(layer)) + " produced no nodes; kept version " +
               std::to_string(current.version()));
    }
    if (layer == Layer::kL4) edit.phase_state = PhaseState::kFullBuilt;
    if (!generated_at.empty()) edit.generated_at = generated_at;
    current = current.Apply(edit);
    if (sink) sink(current);
    edit = GraphEdit{};
  }
  return current;
}

Json DimensionsToJson(const LayeredGraph &graph) {
  Json out = Json::object();
  for (Layer layer : kUpperLayers) {
    Json arr = Json::array();
    for (const auto *d : graph.DimensionsAt(layer)) {
      arr.push_back(Json{{"title", d->title}, {"description", d->description}});
    }
    out[std::string(LayerName(layer))] = arr;
  }
  return out;
}

}  // namespace ptm
