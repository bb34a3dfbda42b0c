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

#ifndef PTM_TESTS_SUPPORT_FIXTURES_H_
#define PTM_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <random>
#include <string>

#include "ptm/base/json.h"
#include "ptm/graph/graph_json.h"

namespace ptm::testing {

inline std::string AssetPath(const std::string &relative) {
  return std::string(PTM_DEFAULT_DATA_ASSET_DIR) + "/" + relative;
}

// Hand-built L0..L4 sample graph with the nine analytical lenses as
// dimensions.
inline LayeredGraph LoadSampleGraph() {
  return GraphFromJson(
      ParseJsonOrDie(ReadFile(AssetPath("fixtures/sample_graph.json")), "sample graph"));
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ptm-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace ptm::testing

#endif  // PTM_TESTS_SUPPORT_FIXTURES_H_
