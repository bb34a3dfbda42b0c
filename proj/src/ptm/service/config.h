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

#ifndef PTM_SERVICE_CONFIG_H_
#define PTM_SERVICE_CONFIG_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "ptm/abstraction/abstraction.h"
#include "ptm/base/json.h"
#include "ptm/consensus/consensus.h"
#include "ptm/eval/harness.h"

namespace ptm {

// live: send prompts to the configured backend. record: same, and store
// every reply under fixture_dir. replay: answer only from fixture_dir.
enum class LlmMode { kLive, kRecord, kReplay };
std::string_view LlmModeName(LlmMode mode);
LlmMode ParseLlmMode(std::string_view name);

struct LlmSettings {
  std::string backend = "http";  // "http" or "scripted" (offline stand-in)
  std::string endpoint;
  std::string api_key;
  std::string model_name = "gemini-2.5-pro";
  double temperature = 0.0;
  LlmMode mode = LlmMode::kLive;
  std::string fixture_dir;
  int max_in_flight = 4;
  int max_retries = 3;
};

// An empty endpoint selects the local hashing embedder.
struct EmbeddingSettings {
  std::string endpoint;
  std::string api_key;
  std::string model_name = "all-MiniLM-L6-v2";
  int dim = 384;
};

struct EvalSettings {
  int num_target_labels = 5;
  TestsetConfig testset{5, 2, 14, 42};
};

struct ServerSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string api_token;  // empty disables the bearer check
};

struct PipelineConfig {
  std::string data_dir = "ptm-data";
  std::string prompt_dir;  // empty: built-in asset directory
  uint64_t seed = 42;
  ConsensusConfig consensus;
  AbstractionConfig abstraction;
  LlmSettings llm;
  EmbeddingSettings embedding;
  EvalSettings eval;
  int hitl_session_size = 18;
  ServerSettings server;

  // Copies `seed` into every seeded component.
  void PropagateSeed();
  void Validate() const;  // kInvalidArgument
};

using EnvLookup = std::function<const char *(const char *)>;

// PTM_LLM_ENDPOINT, PTM_LLM_API_KEY, PTM_EMBED_ENDPOINT, PTM_DATA_DIR, PTM_MODE.
void ApplyEnvironment(PipelineConfig &config, const EnvLookup &lookup);

// Merges a (possibly partial) config document. Unknown keys are rejected so
// that typos do not silently fall back to defaults.
void ApplyConfigJson(PipelineConfig &config, const Json &doc);

// Secrets are replaced by "***".
Json ConfigToJson(const PipelineConfig &config);

// Defaults, then environment, then the optional JSON config file. Command
// line flags are applied by the caller afterwards.
PipelineConfig LoadConfig(const std::string &config_path, const EnvLookup &lookup);

// Command line values; empty or unset keeps the configured value.
struct ConfigFlags {
  std::string data_dir;
  std::string mode;
  std::string fixture_dir;
  std::string llm_backend;
  std::string llm_endpoint;
  std::string model;
  std::string embed_endpoint;
  std::optional<uint64_t> seed;
};

// Applies the flags and re-propagates the seed.
void ApplyFlags(PipelineConfig &config, const ConfigFlags &flags);

}  // namespace ptm

#endif  // PTM_SERVICE_CONFIG_H_
