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

#ifndef PTM_EVAL_SEMANTICS_H_
#define PTM_EVAL_SEMANTICS_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/consensus/embedding.h"
#include "ptm/graph/types.h"

namespace ptm {

// C_v parameters: boolean sliding window of 110 tokens over the reference
// texts and the 10 most frequent content terms per topic.
inline constexpr int kCvWindow = 110;
inline constexpr int kCvTopTerms = 10;

// Most frequent content terms of the topic's texts, ties broken
// alphabetically.
std::vector<std::string> TopTerms(const std::vector<std::string> &texts, int top_n = kCvTopTerms);

// C_v coherence of one topic's terms against a reference corpus: one-set
// segmentation, NPMI context vectors over the topic terms, cosine indirect
// confirmation, averaged over terms.
double CvCoherence(const std::vector<std::string> &terms,
                   const std::vector<std::string> &reference_texts, int window = kCvWindow);

// Mean silhouette over a precomputed distance matrix. Points labelled
// kNoise are ignored; a point alone in its cluster scores 0. Undefined
// (empty) with fewer than two clusters.
std::optional<double> Silhouette(const std::vector<double> &distances, size_t n,
                                 const std::vector<int> &labels);

struct LayerSemantics {
  Layer layer = Layer::kL1;
  int node_count = 0;
  bool defined = false;  // false below three nodes
  double coherence = 0;
  double mean_pairwise_similarity = 0;
  double within_topic_similarity = 0;
  std::optional<double> silhouette;
  int topic_count = 0;
};

// Embeds node texts, clusters them into topics and scores them.
LayerSemantics MeasureLayer(Layer layer, const std::vector<std::string> &texts,
                            EmbeddingProvider &provider, int reduce_dim = 25);

Json LayerSemanticsToJson(const LayerSemantics &s);

}  // namespace ptm

#endif  // PTM_EVAL_SEMANTICS_H_
