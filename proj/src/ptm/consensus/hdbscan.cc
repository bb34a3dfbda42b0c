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

#include "ptm/consensus/hdbscan.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "ptm/base/error.h"

namespace ptm {

namespace {

// Distances below this are treated as zero (identical embeddings).
constexpr double kZero = 1e-12;
constexpr double kMaxLambda = 1e12;

double Lambda(double distance) { return distance <= kZero ? kMaxLambda : 1.0 / distance; }

struct Merge {
  int left;
  int right;
  double distance;
  int size;
};

struct CondensedEdge {
  int parent;  // cluster label (>= n)
  int child;   // point index (< n) or cluster label (>= n)
  double lambda;
  int size;
};

std::vector<double> CoreDistances(const std::vector<double> &d, size_t n, int min_samples) {
  std::vector<double> core(n, 0.0);
  size_t k = static_cast<size_t>(std::max(1, min_samples));
  k = std::min(k, n);
  std::vector<double> row(n);
  for (size_t i = 0; i < n; ++i) {
    std::copy(d.begin() + static_cast<long>(i * n), d.begin() + static_cast<long>((i + 1) * n),
              row.begin());
    row[i] = 0.0;
    std::nth_element(row.begin(), row.begin() + static_cast<long>(k - 1), row.end());
    core[i] = row[k - 1];
  }
  return core;
}

// Prim's algorithm over the complete mutual-reachability graph, then edges
// sorted by weight (stable, so ties keep discovery order).
std::vector<Merge> SingleLinkage(const std::vector<double> &d, size_t n,
                                 const std::vector<double> &core) {
  struct Edge {
    int a, b;
    double w;
  };
  std::vector<Edge> mst;
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> from(n, -1);
  size_t current = 0;
  in_tree[0] = true;
  for (size_t step = 1; step < n; ++step) {
    for (size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      double mr = std::max({core[current], core[j], d[current * n + j]});
      if (mr < best[j]) {
        best[j] = mr;
        from[j] = static_cast<int>(current);
      }
    }
    size_t next = n;
    for (size_t j = 0; j < n; ++j) {
      if (!in_tree[j] && (next == n || best[j] < best[next])) next = j;
    }
    mst.push_back({from[next], static_cast<int>(next), best[next]});
    in_tree[next] = true;
    current = next;
  }
  std::stable_sort(mst.begin(), mst.end(), [](const Edge &x, const Edge &y) { return x.w < y.w; });

  // Union-find over dendrogram nodes; node ids n.. are merges.
  std::vector<int> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> size(2 * n - 1, 1);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  std::vector<Merge> merges;
  int next_id = static_cast<int>(n);
  for (const Edge &e : mst) {
    int ra = find(e.a), rb = find(e.b);
    int id = next_id++;
    parent[static_cast<size_t>(ra)] = id;
    parent[static_cast<size_t>(rb)] = id;
    size[static_cast<size_t>(id)] = size[static_cast<size_t>(ra)] + size[static_cast<size_t>(rb)];
    merges.push_back({ra, rb, e.w, size[static_cast<size_t>(id)]});
  }
  return merges;
}

}  // namespace

std::vector<int> Hdbscan(const std::vector<double> &distances, size_t n,
                         const HdbscanOptions &options) {
  if (distances.size() != n * n) Fail(ErrorCode::kInvalidArgument, "distance matrix size");
  std::vector<int> labels(n, kNoise);
  if (n < 2) return labels;
  const int mcs = std::max(2, options.min_cluster_size);

  std::vector<double> core = CoreDistances(distances, n, options.min_samples);
  std::vector<Merge> merges = SingleLinkage(distances, n, core);
  const int ni = static_cast<int>(n);
  auto merge_of = [&](int node) -> const Merge & { return merges[static_cast<size_t>(node - ni)]; };
  auto size_of = [&](int node) { return node < ni ? 1 : merge_of(node).size; };
  auto leaves = [&](int node, std::vector<int> &out) {
    std::vector<int> stack{node};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (x < ni) {
        out.push_back(x);
      } else {
        stack.push_back(merge_of(x).right);
        stack.push_back(merge_of(x).left);
      }
    }
  };

  // Condense: walk top-down, tracking which cluster label each dendrogram
  // node belongs to.
  std::vector<CondensedEdge> tree;
  const int root = 2 * ni - 2;
  int next_label = ni + 1;
  std::vector<std::pair<int, int>> queue{{root, ni}};  // (dendrogram node, cluster label)
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    auto [node, label] = queue[qi];
    const Merge &m = merge_of(node);
    double lambda = Lambda(m.distance);
    auto fall_out = [&](int sub) {
      std::vector<int> pts;
      leaves(sub, pts);
      for (int p : pts) tree.push_back({label, p, lambda, 1});
    };
    if (m.distance <= kZero) {
      fall_out(node);
      continue;
    }
    int ls = size_of(m.left), rs = size_of(m.right);
    if (ls >= mcs && rs >= mcs) {
      for (int child : {m.left, m.right}) {
        int child_label = next_label++;
        tree.push_back({label, child_label, lambda, size_of(child)});
        queue.push_back({child, child_label});
      }
    } else {
      for (int child : {m.left, m.right}) {
        if (size_of(child) < mcs) {
          fall_out(child);
        } else {
          queue.push_back({child, label});
        }
      }
    }
  }

  const int num_labels = next_label;
  std::vector<double> birth(static_cast<size_t>(num_labels), 0.0);
  std::vector<std::vector<int>> children(static_cast<size_t>(num_labels));
  for (const auto &e : tree) {
    if (e.child >= ni) {
      birth[static_cast<size_t>(e.child)] = e.lambda;
      children[static_cast<size_t>(e.parent)].push_back(e.child);
    }
  }
  std::vector<double> stability(static_cast<size_t>(num_labels), 0.0);
  for (const auto &e : tree) {
    stability[static_cast<size_t>(e.parent)] +=
        (e.lambda - birth[static_cast<size_t>(e.parent)]) * e.size;
  }

  // Excess of mass, bottom-up. Child labels are always larger than parents.
  std::vector<bool> selected(static_cast<size_t>(num_labels), false);
  for (int c = num_labels - 1; c > ni; --c) {
    double child_sum = 0;
    for (int ch : children[static_cast<size_t>(c)]) child_sum += stability[static_cast<size_t>(ch)];
    if (!children[static_cast<size_t>(c)].empty() && child_sum > stability[static_cast<size_t>(c)]) {
      stability[static_cast<size_t>(c)] = child_sum;
    } else {
      selected[static_cast<size_t>(c)] = true;
      std::vector<int> stack(children[static_cast<size_t>(c)]);
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        selected[static_cast<size_t>(x)] = false;
        for (int y : children[static_cast<size_t>(x)]) stack.push_back(y);
      }
    }
  }

  // Map each point to the cluster it falls out of, then up to the selected
  // ancestor.
  std::vector<int> parent_of(static_cast<size_t>(num_labels), -1);
  for (const auto &e : tree) {
    if (e.child >= ni) parent_of[static_cast<size_t>(e.child)] = e.parent;
  }
  std::vector<int> raw(n, kNoise);
  bool any_selected = std::any_of(selected.begin(), selected.end(), [](bool b) { return b; });
  if (any_selected) {
    for (const auto &e : tree) {
      if (e.child >= ni) continue;
      for (int c = e.parent; c >= 0; c = parent_of[static_cast<size_t>(c)]) {
        if (selected[static_cast<size_t>(c)]) {
          raw[static_cast<size_t>(e.child)] = c;
          break;
        }
      }
    }
  } else {
    double top = 0;
    for (const auto &e : tree) top = std::max(top, e.lambda);
    for (const auto &e : tree) {
      if (e.child < ni && e.lambda >= top * (1 - 1e-9)) raw[static_cast<size_t>(e.child)] = ni;
    }
  }

  // Renumber by smallest member index.
  std::map<int, int> renumber;
  for (size_t i = 0; i < n; ++i) {
    if (raw[i] == kNoise) continue;
    auto it = renumber.find(raw[i]);
    if (it == renumber.end()) it = renumber.emplace(raw[i], static_cast<int>(renumber.size())).first;
    labels[i] = it->second;
  }
  return labels;
}

}  // namespace ptm
