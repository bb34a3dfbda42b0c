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

#ifndef PTM_CONSENSUS_HDBSCAN_H_
#define PTM_CONSENSUS_HDBSCAN_H_

#include <vector>

namespace ptm {

constexpr int kNoise = -1;

struct HdbscanOptions {
  int min_cluster_size = 2;
  // Neighbour count for core distances, the point itself included.
  int min_samples = 2;
};

// Hierarchical density clustering over a dense symmetric distance matrix
// (row-major, n x n). Returns one label per point; labels are 0..k-1 in order
// of each cluster's smallest member index, outliers get kNoise.
//
// Follows the usual construction: mutual reachability, minimum spanning tree,
// single linkage, condensed tree, excess-of-mass selection with the root
// excluded. Two adjustments for tiny and degenerate inputs:
//   - Merges at distance zero are never treated as splits; every point below
//     such a merge falls out at the maximal density together.
//   - When the condensed tree has no cluster below the root, the root is
//     selected and only points that persist to its maximal density are kept.
std::vector<int> Hdbscan(const std::vector<double> &distances, size_t n,
                         const HdbscanOptions &options = {});

}  // namespace ptm

#endif  // PTM_CONSENSUS_HDBSCAN_H_
