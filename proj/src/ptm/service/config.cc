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

#include "ptm/service/config.h"

#include <set>

#include "ptm/base/error.h"

namespace ptm {

std::string_view LlmModeName(LlmMode mode) {
  switch (mode) {
    case LlmMode::kLive: return "live";
    case LlmMode::kRecord: return "record";
    case LlmMode::kReplay: return "replay";
  }
  return "live";
}

LlmMode ParseLlmMode(std::string_view name) {
  if (name == "live") return LlmMode::kLive;
  if (name == "record") return LlmMode::kRecord;
  if (name == "replay") return LlmMode::kReplay;
  Fail(ErrorCode::kInvalidArgument, "unknown LLM mode: " + std::string(name),
       "expected live, record or replay");
}

void PipelineConfig::PropagateSeed() {
  consensus.seed = seed;
  abstraction.seed = seed;
  eval.testset.seed = seed;
}

void PipelineConfig::Validate() const {
  consensus.Validate();
  abstraction.Validate();
  if (data_dir.empty()) Fail(ErrorCode::kInvalidArgument, "data_dir is empty");
  if (llm.backend != "http" && llm.backend != "scripted") {
    Fail(ErrorCode::kInvalidArgument, "llm.backend must be http or scripted");
  }
  if (llm.mode != LlmMode::kLive && llm.temperature != 0.0) {
    Fail(ErrorCode::kInvalidArgument, "recorded and replayed runs require temperature 0.0");
  }
  if (llm.mode != LlmMode::kLive && llm.fixture_dir.empty()) {
    Fail(ErrorCode::kInvalidArgument, "llm.fixture_dir is required in record and replay modes");
  }
  if (llm.max_in_flight < 1) Fail(ErrorCode::kInvalidArgument, "llm.max_in_flight must be >= 1");
  if (embedding.dim < 2) Fail(ErrorCode::kInvalidArgument, "embedding.dim must be >= 2");
  if (eval.num_target_labels < 1) {
    Fail(ErrorCode::kInvalidArgument, "eval.num_target_labels must be >= 1");
  }
  if (eval.testset.window_days < 1 || eval.testset.num_windows < 1) {
    Fail(ErrorCode::kInvalidArgument, "eval windows must be positive");
  }
  if (hitl_session_size < 1) Fail(ErrorCode::kInvalidArgument, "hitl.session_size must be >= 1");
  if (server.port < 0 || server.port > 65535) Fail(ErrorCode::kInvalidArgument, "bad server.port");
}

void ApplyEnvironment(PipelineConfig &config, const EnvLookup &lookup) {
  auto get = [&lookup](const char *name) -> std::optional<std::string> {
    const char *v = lookup(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("PTM_LLM_ENDPOINT")) config.llm.endpoint = *v;
  if (auto v = get("PTM_LLM_API_KEY")) config.llm.api_key = *v;
  if (auto v = get("PTM_EMBED_ENDPOINT")) config.embedding.endpoint = *v;
  if (auto v = get("PTM_DATA_DIR")) config.data_dir = *v;
  if (auto v = get("PTM_MODE")) config.llm.mode = ParseLlmMode(*v);
}

namespace {

class Section {
 public:
  Section(const Json &doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) Fail(ErrorCode::kInvalidArgument, path_ + " must be an object");
  }

  template <typename T>
  void Read(const char *key, T &out) {
    seen_.insert(key);
    if (!doc_.contains(key)) return;
    try {
      out = doc_.at(key).get<T>();
    } catch (const Json::exception &) {
      Fail(ErrorCode::kInvalidArgument, "config key " + path_ + key + " has the wrong type");
    }
  }

  std::optional<Json> Child(const char *key) {
    seen_.insert(key);
    if (!doc_.contains(key)) return std::nullopt;
    return doc_.at(key);
  }

  void RejectUnknown() const {
    for (const auto &[key, value] : doc_.items()) {
      if (!seen_.count(key)) Fail(ErrorCode::kInvalidArgument, "unknown config key " + path_ + key);
    }
  }

 private:
  const Json &doc_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

void ApplyConfigJson(PipelineConfig &config, const Json &doc) {
  Section root(doc, "");
  root.Read("data_dir", config.data_dir);
  root.Read("prompt_dir", config.prompt_dir);
  root.Read("seed", config.seed);
  if (auto c = root.Child("consensus")) {
    Section s(*c, "consensus.");
    if (auto w = s.Child("weights")) {
      Section ws(*w, "consensus.weights.");
      for (Attribute a : kAttributes) {
        std::string name(AttributeName(a));
        ws.Read(name.c_str(), config.consensus.weights[static_cast<size_t>(a)]);
      }
      ws.RejectUnknown();
    }
    s.Read("same_date_penalty", config.consensus.same_date_penalty);
    s.Read("tau", config.consensus.tau);
    s.Read("reduce_dim", config.consensus.reduce_dim);
    s.Read("min_cluster_size", config.consensus.min_cluster_size);
    s.Read("min_samples", config.consensus.min_samples);
    s.RejectUnknown();
  }
  if (auto c = root.Child("abstraction")) {
    Section s(*c, "abstraction.");
    s.Read("sample_size", config.abstraction.sample_size);
    s.Read("dims_per_layer", config.abstraction.dims_per_layer);
    s.Read("clusters_per_dimension", config.abstraction.clusters_per_dimension);
    s.RejectUnknown();
  }
  if (auto c = root.Child("llm")) {
    Section s(*c, "llm.");
    std::string mode(LlmModeName(config.llm.mode));
    s.Read("backend", config.llm.backend);
    s.Read("endpoint", config.llm.endpoint);
    s.Read("api_key", config.llm.api_key);
    s.Read("model_name", config.llm.model_name);
    s.Read("temperature", config.llm.temperature);
    s.Read("mode", mode);
    s.Read("fixture_dir", config.llm.fixture_dir);
    s.Read("max_in_flight", config.llm.max_in_flight);
    s.Read("max_retries", config.llm.max_retries);
    s.RejectUnknown();
    config.llm.mode = ParseLlmMode(mode);
  }
  if (auto c = root.Child("embedding")) {
    Section s(*c, "embedding.");
    s.Read("endpoint", config.embedding.endpoint);
    s.Read("api_key", config.embedding.api_key);
    s.Read("model_name", config.embedding.model_name);
    s.Read("dim", config.embedding.dim);
    s.RejectUnknown();
  }
  if (auto c = root.Child("eval")) {
    Section s(*c, "eval.");
    s.Read("num_target_labels", config.eval.num_target_labels);
    s.Read("window_days", config.eval.testset.window_days);
    s.Read("num_windows", config.eval.testset.num_windows);
    s.Read("max_items_per_window", config.eval.testset.max_items_per_window);
    s.RejectUnknown();
  }
  if (auto c = root.Child("hitl")) {
    Section s(*c, "hitl.");
    s.Read("session_size", config.hitl_session_size);
    s.RejectUnknown();
  }
  if (auto c = root.Child("server")) {
    Section s(*c, "server.");
    s.Read("host", config.server.host);
    s.Read("port", config.server.port);
    s.Read("api_token", config.server.api_token);
    s.RejectUnknown();
  }
  root.RejectUnknown();
}

Json ConfigToJson(const PipelineConfig &config) {
  auto secret = [](const std::string &s) { return s.empty() ? s : std::string("***"); };
  Json weights = Json::object();
  for (Attribute a : kAttributes) weights[std::string(AttributeName(a))] = config.consensus.weight(a);
  return Json{
      {"data_dir", config.data_dir},
      {"prompt_dir", config.prompt_dir},
      {"seed", config.seed},
      {"consensus",
       {{"weights", weights},
        {"same_date_penalty", config.consensus.same_date_penalty},
        {"tau", config.consensus.tau},
        {"reduce_dim", config.consensus.reduce_dim},
        {"min_cluster_size", config.consensus.min_cluster_size},
        {"min_samples", config.consensus.min_samples}}},
      {"abstraction",
       {{"sample_size", config.abstraction.sample_size},
        {"dims_per_layer", config.abstraction.dims_per_layer},
        {"clusters_per_dimension", config.abstraction.clusters_per_dimension}}},
      {"llm",
       {{"backend", config.llm.backend},
        {"endpoint", config.llm.endpoint},
        {"api_key", secret(config.llm.api_key)},
        {"model_name", config.llm.model_name},
        {"temperature", config.llm.temperature},
        {"mode", LlmModeName(config.llm.mode)},
        {"fixture_dir", config.llm.fixture_dir},
        {"max_in_flight", config.llm.max_in_flight},
        {"max_retries", config.llm.max_retries}}},
      {"embedding",
       {{"endpoint", config.embedding.endpoint},
        {"api_key", secret(config.embedding.api_key)},
        {"model_name", config.embedding.model_name},
        {"dim", config.embedding.dim}}},
      {"eval",
       {{"num_target_labels", config.eval.num_target_labels},
        {"window_days", config.eval.testset.window_days},
        {"num_windows", config.eval.testset.num_windows},
        {"max_items_per_window", config.eval.testset.max_items_per_window}}},
      {"hitl", {{"session_size", config.hitl_session_size}}},
      {"server",
       {{"host", config.server.host},
        {"port", config.server.port},
        {"api_token", secret(config.server.api_token)}}},
  };
}

PipelineConfig LoadConfig(const std::string &config_path, const EnvLookup &lookup) {
  PipelineConfig config;
  ApplyEnvironment(config, lookup);
  if (!config_path.empty()) {
    ApplyConfigJson(config, ParseJsonOrDie(ReadFile(config_path), "config file " + config_path));
  }
  config.PropagateSeed();
  return config;
}

void ApplyFlags(PipelineConfig &config, const ConfigFlags &flags) {
  if (!flags.data_dir.empty()) config.data_dir = flags.data_dir;
  if (!flags.mode.empty()) config.llm.mode = ParseLlmMode(flags.mode);
  if (!flags.fixture_dir.empty()) config.llm.fixture_dir = flags.fixture_dir;
  if (!flags.llm_backend.empty()) config.llm.backend = flags.llm_backend;
  if (!flags.llm_endpoint.empty()) config.llm.endpoint = flags.llm_endpoint;
  if (!flags.model.empty()) config.llm.model_name = flags.model;
  if (!flags.embed_endpoint.empty()) config.embedding.endpoint = flags.embed_endpoint;
  if (flags.seed) config.seed = *flags.seed;
  config.PropagateSeed();
}

}  // namespace ptm
