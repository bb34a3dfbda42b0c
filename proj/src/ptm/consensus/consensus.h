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

#ifndef PTM_CONSENSUS_CONSENSUS_H_
#define PTM_CONSENSUS_CONSENSUS_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ptm/consensus/embedding.h"
#include "ptm/consensus/hdbscan.h"
#include "ptm/graph/graph.h"
#include "ptm/llm/llm_client.h"

namespace ptm {

enum class Attribute { kWhat, kWhen, kWhere, kWho, kWhy, kHow };
inline constexpr std::array<Attribute, 6> kAttributes = {
    Attribute::kWhat, Attribute::kWhen, Attribute::kWhere,
    Attribute::kWho,  Attribute::kWhy,  Attribute::kHow};

std::string_view AttributeName(Attribute a);  // "what", "when", ...
const std::string &AttributeText(const BehavioralInstance &x, Attribute a);

struct ConsensusConfig {
  std::array<int, 6> weights = {2, 1, 1, 1, 1, 1};  // indexed like kAttributes
  int same_date_penalty = 2;
  int tau = 4;
  int reduce_dim = 25;
  int min_cluster_size = 2;
  int min_samples = 2;
  uint64_t seed = 42;

  int weight(Attribute a) const { return weights[static_cast<size_t>(a)]; }
  void Validate() const;  // throws kInvalidArgument
};

struct AttributeAssignment {
  Attribute attribute = Attribute::kWhat;
  std::map<std::string, int> labels;  // instance id -> label or kNoise
  bool reduced = false;               // false when reduction was skipped
};

// Pairwise agreement over instances in natural id order. Diagonals are zero.
struct ConsensusMatrix {
  std::vector<std::string> ids;
  std::vector<Date> dates;
  std::vector<int> raw;      // R
  std::vector<int> penalty;  // P
  std::vector<int> score;    // S = R - P

  size_t size() const { return ids.size(); }
  int r(size_t i, size_t j) const { return raw[i * ids.size() + j]; }
  int p(size_t i, size_t j) const { return penalty[i * ids.size() + j]; }
  int s(size_t i, size_t j) const { return score[i * ids.size() + j]; }
};

struct ClusterSet {
  // Members ordered by (date, id); clusters ordered by earliest member.
  std::vector<std::vector<std::string>> clusters;
  std::vector<std::string> unclustered;
};

// Embeds one attribute per instance, reduces, and density-clusters.
AttributeAssignment BaseCluster(const std::vector<BehavioralInstance> &instances,
                                Attribute attribute, EmbeddingProvider &provider,
                                const ConsensusConfig &config);

ConsensusMatrix BuildConsensus(const std::vector<AttributeAssignment> &assignments,
                               const std::map<std::string, Date> &dates,
                               const ConsensusConfig &config);

// Connected components of the graph with an edge wherever S >= tau.
ClusterSet FormClusters(const ConsensusMatrix &matrix, int tau);

// R, P and S as three CSV sections, each headed by the instance ids.
std::string ConsensusCsv(const ConsensusMatrix &matrix);

struct L1Synthesis {
  std::vector<std::string> cluster;
  std::vector<PtmNode> nodes;
  std::vector<std::string> dropped;
  bool failed = false;
  std::string error;
};

// Turns one consensus cluster into 1-3 L1 nodes via the IO template.
L1Synthesis SynthesizeL1(LlmClient &client, const std::vector<BehavioralInstance> &cluster);

std::string FormatInstancesForPrompt(const std::vector<BehavioralInstance> &instances);

struct Phase1Report {
  std::vector<AttributeAssignment> assignments;
  ConsensusMatrix matrix;
  ClusterSet clusters;
  std::vector<L1Synthesis> syntheses;
};

// Runs base clustering, consensus and L1 synthesis over every instance in
// the graph, returning the next snapshot with L1 nodes and phase l1_built.
// `generated_at` stamps the snapshot when non-empty.
LayeredGraph BuildL1(const LayeredGraph &graph, LlmClient &client, EmbeddingProvider &provider,
                     const ConsensusConfig &config, const std::string &generated_at = "",
                     Phase1Report *report = nullptr);

}  // namespace ptm

#endif  // PTM_CONSENSUS_CONSENSUS_H_
