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

#include "ptm/graph/store.h"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ptm/base/error.h"
#include "ptm/base/json.h"
#include "ptm/graph/graph_json.h"

namespace ptm {

namespace fs = std::filesystem;

void ValidateUserId(const std::string &user_id) {
  if (user_id.empty() || user_id.size() > 128) {
    Fail(ErrorCode::kInvalidArgument, "invalid user id");
  }
  for (char c : user_id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
      Fail(ErrorCode::kInvalidArgument, "invalid user id: " + user_id);
    }
  }
  if (user_id == "." || user_id == "..") Fail(ErrorCode::kInvalidArgument, "invalid user id");
}

GraphStore::GraphStore(std::string root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

std::string GraphStore::UserDir(const std::string &user_id) const {
  ValidateUserId(user_id);
  return (fs::path(root_) / "users" / user_id).string();
}

std::string GraphStore::SnapshotPath(const std::string &user_id, int version) const {
  char name[32];
  std::snprintf(name, sizeof(name), "v%06d.json", version);
  return (fs::path(UserDir(user_id)) / "snapshots" / name).string();
}

std::vector<int> GraphStore::Versions(const std::string &user_id) const {
  std::vector<int> out;
  fs::path dir = fs::path(UserDir(user_id)) / "snapshots";
  if (!fs::exists(dir)) return out;
  for (const auto &e : fs::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (name.size() == 12 && name[0] == 'v' && name.ends_with(".json")) {
      out.push_back(std::stoi(name.substr(1, 6)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> GraphStore::LatestVersion(const std::string &user_id) const {
  auto v = Versions(user_id);
  if (v.empty()) return std::nullopt;
  return v.back();
}

bool GraphStore::HasGraph(const std::string &user_id) const {
  return LatestVersion(user_id).has_value();
}

LayeredGraph GraphStore::Load(const std::string &user_id, std::optional<int> version) const {
  auto latest = LatestVersion(user_id);
  if (!latest) Fail(ErrorCode::kNotFound, "no graph for user " + user_id);
  int v = version.value_or(*latest);
  std::string path = SnapshotPath(user_id, v);
  if (!fs::exists(path)) {
    Fail(ErrorCode::kNotFound, "no snapshot v" + std::to_string(v) + " for user " + user_id);
  }
  return GraphFromJson(ParseJsonOrDie(ReadFile(path), path));
}

std::unique_lock<std::mutex> GraphStore::LockUser(const std::string &user_id) {
  std::mutex *mu;
  {
    std::lock_guard<std::mutex> g(locks_mu_);
    auto &slot = locks_[user_id];
    if (!slot) slot = std::make_unique<std::mutex>();
    mu = slot.get();
  }
  return std::unique_lock<std::mutex>(*mu);
}

LayeredGraph GraphStore::Update(const std::string &user_id,
                                const std::function<LayeredGraph(const LayeredGraph &)> &fn) {
  ValidateUserId(user_id);
  auto lock = LockUser(user_id);
  LayeredGraph current = HasGraph(user_id) ? Load(user_id) : LayeredGraph(user_id);
  LayeredGraph next = fn(current);
  if (next.version() == current.version()) return current;
  if (next.version() != current.version() + 1 || next.user_id() != user_id) {
    Fail(ErrorCode::kInternal, "graph update must advance exactly one version");
  }
  Commit(current, next);
  return next;
}

LayeredGraph GraphStore::UpdateSeries(
    const std::string &user_id,
    const std::function<void(const LayeredGraph &, const Sink &)> &fn) {
  ValidateUserId(user_id);
  auto lock = LockUser(user_id);
  LayeredGraph current = HasGraph(user_id) ? Load(user_id) : LayeredGraph(user_id);
  fn(current, [&](const LayeredGraph &next) {
    if (next.version() != current.version() + 1 || next.user_id() != user_id) {
      Fail(ErrorCode::kInternal, "graph update must advance exactly one version");
    }
    Commit(current, next);
    current = next;
  });
  return current;
}

void GraphStore::Commit(const LayeredGraph &previous, const LayeredGraph &next) {
  std::string path = SnapshotPath(next.user_id(), next.version());
  if (fs::exists(path)) Fail(ErrorCode::kAlreadyExists, "snapshot exists: " + path);
  WriteFileAtomic(path, GraphToJson(next).dump(2) + "\n");

  std::ofstream log(fs::path(UserDir(next.user_id())) / "revisions.jsonl", std::ios::app);
  for (const auto &[id, n] : next.nodes()) {
    size_t before = 0;
    auto it = previous.nodes().find(id);
    if (it != previous.nodes().end()) before = it->second.revisions.size();
    for (size_t i = before; i < n.revisions.size(); ++i) {
      const auto &r = n.revisions[i];
      Json line{{"version", next.version()}, {"node_id", id},
                {"timestamp", r.timestamp}, {"feedback_id", r.feedback_id},
                {"prior_content", r.prior_content}, {"content", r.content}};
      log << line.dump() << "\n";
    }
  }
}

}  // namespace ptm
