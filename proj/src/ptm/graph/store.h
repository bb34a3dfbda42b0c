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

#ifndef PTM_GRAPH_STORE_H_
#define PTM_GRAPH_STORE_H_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ptm/graph/graph.h"

namespace ptm {

// File-backed snapshot store. Layout under the root:
//
//   users/<user_id>/snapshots/v000001.json   one export document per version
//   users/<user_id>/revisions.jsonl          append-only node revision log
//
// Snapshots are never rewritten. Writes for one user are serialized through
// Update(); readers only ever open complete files (write-temp-then-rename).
class GraphStore {
 public:
  explicit GraphStore(std::string root);

  const std::string &root() const { return root_; }
  std::string UserDir(const std::string &user_id) const;

  bool HasGraph(const std::string &user_id) const;
  std::optional<int> LatestVersion(const std::string &user_id) const;
  std::vector<int> Versions(const std::string &user_id) const;

  // Latest snapshot when `version` is empty. kNotFound for unknown users or
  // versions.
  LayeredGraph Load(const std::string &user_id,
                    std::optional<int> version = std::nullopt) const;

  // Loads the latest snapshot (or an empty version-0 graph), applies `fn`,
  // and commits the result if its version advanced. Returns the committed
  // snapshot.
  LayeredGraph Update(const std::string &user_id,
                      const std::function<LayeredGraph(const LayeredGraph &)> &fn);

  // Like Update(), for work that yields several consecutive snapshots. `fn`
  // gets the latest snapshot and a sink; every snapshot passed to the sink is
  // committed at once and must advance exactly one version. Snapshots already
  // committed stay if `fn` later throws. Returns the last committed snapshot.
  using Sink = std::function<void(const LayeredGraph &)>;
  LayeredGraph UpdateSeries(const std::string &user_id,
                            const std::function<void(const LayeredGraph &, const Sink &)> &fn);

  // Serializes an arbitrary critical section for one user.
  std::unique_lock<std::mutex> LockUser(const std::string &user_id);

 private:
  void Commit(const LayeredGraph &previous, const LayeredGraph &next);
  std::string SnapshotPath(const std::string &user_id, int version) const;

  std::string root_;
  std::mutex locks_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

// Rejects ids that could escape the data directory.
void ValidateUserId(const std::string &user_id);

}  // namespace ptm

#endif  // PTM_GRAPH_STORE_H_
