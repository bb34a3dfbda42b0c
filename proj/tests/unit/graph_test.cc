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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "ptm/base/error.h"
#include "ptm/graph/graph.h"
#include "ptm/graph/graph_json.h"
#include "ptm/graph/store.h"
#include "support/fixtures.h"

namespace ptm {
namespace {

BehavioralInstance Instance(const std::string &id, const std::string &date) {
  BehavioralInstance x;
  x.id = id;
  x.what = "User studied " + id;
  x.when = "Monday, 20:00-21:00";
  x.where = "Home";
  x.date = Date::ParseOrDie(date);
  x.journal_entry_id = "e-" + date;
  return x;
}

PtmNode Node(const std::string &id, Layer layer, std::vector<std::string> sources,
             std::optional<std::string> dim = std::nullopt) {
  PtmNode n;
  n.id = id;
  n.layer = layer;
  n.title = "Title " + id;
  n.content = "Content of " + id;
  n.source_ids = std::move(sources);
  n.dimension_id = std::move(dim);
  return n;
}

// L0 x4, L1 x3, and one L2 dimension.
LayeredGraph SmallGraph() {
  GraphEdit edit;
  edit.instances = {Instance("e1-1", "2025-01-06"), Instance("e1-2", "2025-01-06"),
                    Instance("e2-1", "2025-01-07"), Instance("e3-1", "2025-01-08")};
  edit.dimensions = {AnalyticalDimension{"L2_Dim_1", Layer::kL2, "Routine Analysis", "d"}};
  edit.nodes = {Node("L1_Node_1", Layer::kL1, {"e1-1", "e2-1"}),
                Node("L1_Node_2", Layer::kL1, {"e1-2", "e3-1"}),
                Node("L1_Node_3", Layer::kL1, {"e2-1", "e3-1"})};
  return LayeredGraph("u1").Apply(edit);
}

TEST(PutNodesTest, BumpsVersionAndKeepsOldSnapshot) {
  LayeredGraph g = SmallGraph();
  g = g.Apply({});
  g = g.Apply({});
  g = g.Apply({});
  ASSERT_EQ(g.version(), 4);
  LayeredGraph next = PutNodes(
      g, {Node("L2_Node_1", Layer::kL2, {"L1_Node_1", "L1_Node_2", "L1_Node_3"}, "L2_Dim_1")});
  EXPECT_EQ(next.version(), 5);
  EXPECT_EQ(g.version(), 4);
  EXPECT_FALSE(g.Contains("L2_Node_1"));
  EXPECT_TRUE(next.Contains("L2_Node_1"));
}

TEST(PutNodesTest, RejectsDanglingSource) {
  LayeredGraph g = SmallGraph();
  try {
    PutNodes(g, {Node("L2_Node_1", Layer::kL2, {"L1_Node_1", "L1_Node_99"}, "L2_Dim_1")});
    FAIL() << "expected rejection";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("dangling source"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("L1_Node_99"), std::string::npos);
  }
}

TEST(PutNodesTest, RejectsNonAdjacentLayers) {
  LayeredGraph g = SmallGraph();
  g = g.Apply({.dimensions = {AnalyticalDimension{"L3_Dim_1", Layer::kL3, "Goals", ""}}});
  try {
    PutNodes(g, {Node("L3_Node_1", Layer::kL3, {"e1-1"}, "L3_Dim_1")});
    FAIL() << "expected rejection";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("non-adjacent layers"), std::string::npos);
  }
}

TEST(PutNodesTest, RejectsDuplicateId) {
  LayeredGraph g = SmallGraph();
  EXPECT_THROW(PutNodes(g, {Node("L1_Node_1", Layer::kL1, {"e1-1"})}), Error);
  try {
    PutNodes(g, {Node("L1_Node_1", Layer::kL1, {"e1-1"})});
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kAlreadyExists);
  }
}

TEST(PutNodesTest, EnforcesDimensionRules) {
  LayeredGraph g = SmallGraph();
  EXPECT_THROW(PutNodes(g, {Node("L1_Node_9", Layer::kL1, {"e1-1"}, "L2_Dim_1")}), Error);
  EXPECT_THROW(PutNodes(g, {Node("L2_Node_1", Layer::kL2, {"L1_Node_1"})}), Error);
  EXPECT_THROW(PutNodes(g, {Node("L2_Node_1", Layer::kL2, {})}), Error);
}

TEST(PutNodesTest, AssignsLayerPrefixedIds) {
  LayeredGraph g = SmallGraph();
  std::vector<PtmNode> nodes = {Node("", Layer::kL1, {"e1-1"}), Node("", Layer::kL1, {"e1-2"}),
                                Node("", Layer::kL2, {"L1_Node_1"}, "L2_Dim_1")};
  g.AssignNodeIds(nodes);
  EXPECT_EQ(nodes[0].id, "L1_Node_4");
  EXPECT_EQ(nodes[1].id, "L1_Node_5");
  EXPECT_EQ(nodes[2].id, "L2_Node_1");
}

TEST(InDegreeTest, HandArithmetic) {
  LayeredGraph g = SmallGraph();
  g = g.Apply({.instances = {Instance("e4-1", "2025-01-09")},
               .nodes = {Node("L1_Node_4", Layer::kL1, {"e4-1"})}});
  g = PutNodes(g, {Node("L2_Node_1", Layer::kL2, {"L1_Node_1", "L1_Node_2"}, "L2_Dim_1"),
                   Node("L2_Node_2", Layer::kL2, {"L1_Node_1", "L1_Node_2", "L1_Node_3"},
                        "L2_Dim_1"),
                   Node("L2_Node_3", Layer::kL2,
                        {"L1_Node_1", "L1_Node_2", "L1_Node_3", "L1_Node_4"}, "L2_Dim_1")});
  InDegreeStats s = ComputeInDegree(g, Layer::kL1, Layer::kL2);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_EQ(s.total_links, 9);
  EXPECT_EQ(s.min, 2);
  EXPECT_EQ(s.max, 4);
  EXPECT_NEAR(s.sd, std::sqrt(2.0 / 3.0), 1e-12);
}

TEST(InDegreeTest, SingleNodeAndEmptyLayer) {
  LayeredGraph g = SmallGraph();
  InDegreeStats empty = ComputeInDegree(g, Layer::kL1, Layer::kL2);
  EXPECT_EQ(empty.total_links, 0);
  EXPECT_EQ(empty.mean, 0.0);
  EXPECT_EQ(empty.sd, 0.0);
  g = PutNodes(g, {Node("L2_Node_1", Layer::kL2, {"L1_Node_1"}, "L2_Dim_1")});
  InDegreeStats one = ComputeInDegree(g, Layer::kL1, Layer::kL2);
  EXPECT_DOUBLE_EQ(one.mean, 1.0);
  EXPECT_DOUBLE_EQ(one.sd, 0.0);
  EXPECT_THROW(ComputeInDegree(g, Layer::kL1, Layer::kL3), Error);
  EXPECT_THROW(ComputeInDegree(g, Layer::kL0, Layer::kL1), Error);
}

TEST(InDegreeTest, SampleGraphTopLayer) {
  LayeredGraph g = testing::LoadSampleGraph();
  InDegreeStats s = ComputeInDegree(g, Layer::kL3, Layer::kL4);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_EQ(s.total_links, 2);
}

TEST(TraceTest, SampleNodeTracesThroughNighttimePattern) {
  LayeredGraph g = testing::LoadSampleGraph();
  auto trace = TraceToEvidence(g, "2.3");
  std::vector<std::string> ids;
  for (const auto &x : trace) ids.push_back(x.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"0.1", "0.2", "0.3"}));
  EXPECT_EQ(g.node("1.5").title, "Consistent Nighttime Academic Productivity");
}

TEST(TraceTest, InstanceIsItsOwnEvidence) {
  LayeredGraph g = SmallGraph();
  auto trace = TraceToEvidence(g, "e2-1");
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace[0].id, "e2-1");
}

TEST(TraceTest, SharedInstanceAppearsOnceInDateOrder) {
  LayeredGraph g = SmallGraph();
  g = PutNodes(g, {Node("L2_Node_1", Layer::kL2, {"L1_Node_1", "L1_Node_3"}, "L2_Dim_1")});
  auto trace = TraceToEvidence(g, "L2_Node_1");
  std::vector<std::string> ids;
  for (const auto &x : trace) ids.push_back(x.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"e1-1", "e2-1", "e3-1"}));
  EXPECT_THROW(TraceToEvidence(g, "nope"), Error);
}

TEST(GraphJsonTest, ExportUsesPromptFieldNames) {
  Json doc = GraphToJson(testing::LoadSampleGraph());
  bool saw_l1 = false, saw_l2 = false;
  for (const auto &n : doc["nodes"]) {
    if (n["layer"] == "L1") {
      saw_l1 = true;
      EXPECT_TRUE(n.contains("source_instances"));
    }
    if (n["layer"] == "L2") {
      saw_l2 = true;
      EXPECT_TRUE(n.contains("source_nodes"));
      EXPECT_TRUE(n.contains("dimension_id"));
    }
  }
  EXPECT_TRUE(saw_l1 && saw_l2);
}

// Random layered graphs survive serialize -> deserialize unchanged.
TEST(GraphJsonTest, RoundTripProperty) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    GraphEdit edit;
    int n0 = 1 + rng() % 8;
    for (int i = 0; i < n0; ++i) {
      auto x = Instance("x" + std::to_string(i), "2025-02-0" + std::to_string(1 + rng() % 9));
      x.who = (rng() % 2) ? "" : "Friend";
      if (rng() % 2) x.time_window = TimeWindow{static_cast<int>(rng() % 1440), 600};
      edit.instances.push_back(x);
    }
    std::vector<std::string> below;
    for (auto &x : edit.instances) below.push_back(x.id);
    for (int l = 1; l <= 4; ++l) {
      Layer layer = LayerFromIndex(l);
      std::optional<std::string> dim;
      if (l >= 2) {
        dim = "D" + std::to_string(l);
        edit.dimensions.push_back({*dim, layer, "Lens " + std::to_string(l), "desc"});
      }
      std::vector<std::string> here;
      int count = 1 + rng() % 4;
      for (int k = 0; k < count; ++k) {
        std::vector<std::string> src = below;
        std::shuffle(src.begin(), src.end(), rng);
        src.resize(1 + rng() % src.size());
        std::string id = std::string(LayerName(layer)) + "_Node_" + std::to_string(k + 1);
        edit.nodes.push_back(Node(id, layer, src, dim));
        here.push_back(id);
      }
      below = here;
    }
    edit.phase_state = PhaseState::kFullBuilt;
    edit.generated_at = "2025-02-10T00:00:00Z";
    LayeredGraph g = LayeredGraph("rt").Apply(edit);
    g = g.Apply({.revisions = {{edit.nodes[0].id, "revised", "fb-1", "2025-02-11T00:00:00Z"}}});
    Json doc = GraphToJson(g);
    LayeredGraph back = GraphFromJson(doc);
    EXPECT_EQ(GraphToJson(back).dump(), doc.dump());
    EXPECT_EQ(back.version(), g.version());
    EXPECT_EQ(back.node(edit.nodes[0].id).revisions.size(), 1u);
    StructureAudit audit = AuditStructure(back);
    EXPECT_TRUE(audit.acyclic);
    EXPECT_EQ(audit.non_adjacent_edges, 0);
    EXPECT_EQ(audit.untraceable_nodes, 0);
  }
}

TEST(GraphStoreTest, SnapshotsAreImmutableAndVersioned) {
  testing::ScratchDir dir;
  GraphStore store(dir.str());
  EXPECT_FALSE(store.HasGraph("u1"));
  EXPECT_THROW(store.Load("u1"), Error);
  LayeredGraph g1 = store.Update("u1", [](const LayeredGraph &) { return SmallGraph(); });
  EXPECT_EQ(g1.version(), 1);
  std::string v1 = GraphToJson(store.Load("u1", 1)).dump();
  store.Update("u1", [](const LayeredGraph &g) {
    return g.Apply({.revisions = {{"L1_Node_1", "new content", "fb", "t"}}});
  });
  EXPECT_EQ(*store.LatestVersion("u1"), 2);
  EXPECT_EQ(GraphToJson(store.Load("u1", 1)).dump(), v1);
  EXPECT_EQ(store.Load("u1").node("L1_Node_1").content, "new content");
  EXPECT_THROW(store.Load("u1", 9), Error);
  EXPECT_THROW(store.UserDir("../etc"), Error);
}

}  // namespace
}  // namespace ptm
