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

#ifndef PTM_LLM_LLM_CLIENT_H_
#define PTM_LLM_LLM_CLIENT_H_

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/prompts/prompt_library.h"

namespace ptm {

enum class ResponseShape { kText, kObject, kArray };

struct LlmRequest {
  std::string template_id;
  PromptVariables variables;
  double temperature = 0.0;
  ResponseShape expected_shape = ResponseShape::kObject;
};

// Raw completion transport. Implementations throw Error(kUnavailable) for
// transport failures (retried by LlmClient) and any other code for permanent
// failures.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string Complete(const std::string &prompt, double temperature) = 0;
  virtual std::string name() const = 0;
};

struct LlmCallRecord {
  std::string template_id;
  std::string prompt_key;
  std::string prompt;
  std::string response;
};

struct LlmClientOptions {
  int max_in_flight = 4;
  int max_retries = 3;
  int backoff_initial_ms = 200;
  bool keep_call_log = false;
};

// Renders prompt templates and sends them through a backend. JSON calls get
// exactly one corrective re-ask when the reply does not parse or fails
// validation; a second bad reply is a hard failure.
class LlmClient {
 public:
  LlmClient(const PromptLibrary &library, std::shared_ptr<LlmBackend> backend,
            LlmClientOptions options = {});

  std::string Render(const LlmRequest &request) const;
  std::string Send(const LlmRequest &request);

  // Returns an error message for a structurally unacceptable reply.
  using Validator = std::function<std::optional<std::string>(const Json &)>;
  Json SendJson(const LlmRequest &request, const Validator &validate = nullptr);

  static std::string CorrectiveSuffix();

  const PromptLibrary &library() const { return library_; }
  LlmBackend &backend() { return *backend_; }
  int max_in_flight() const { return options_.max_in_flight; }
  long call_count() const { return calls_.load(); }
  long reask_count() const { return reasks_.load(); }
  std::vector<LlmCallRecord> call_log() const;

 private:
  std::string CompleteWithRetry(const std::string &template_id, const std::string &prompt,
                                double temperature);

  const PromptLibrary &library_;
  std::shared_ptr<LlmBackend> backend_;
  LlmClientOptions options_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<long> calls_{0};
  std::atomic<long> reasks_{0};
  mutable std::mutex log_mu_;
  std::vector<LlmCallRecord> log_;
};

// Replays responses from a fixture directory: one file per prompt, named by
// the 16-hex-digit prompt key, holding the raw response. A miss is an error.
class ReplayBackend : public LlmBackend {
 public:
  explicit ReplayBackend(std::string fixture_dir);
  std::string Complete(const std::string &prompt, double temperature) override;
  std::string name() const override { return "replay"; }

 private:
  std::string dir_;
};

// Forwards to another backend and stores every response as a fixture.
class RecordingBackend : public LlmBackend {
 public:
  RecordingBackend(std::shared_ptr<LlmBackend> inner, std::string fixture_dir);
  std::string Complete(const std::string &prompt, double temperature) override;
  std::string name() const override { return "record:" + inner_->name(); }

 private:
  std::shared_ptr<LlmBackend> inner_;
  std::string dir_;
  std::mutex mu_;
};

// OpenAI-compatible chat completions endpoint (POST {endpoint} with
// {"model", "temperature", "messages":[{"role":"user","content":prompt}]}).
class HttpBackend : public LlmBackend {
 public:
  HttpBackend(std::string endpoint, std::string api_key, std::string model,
              int timeout_seconds = 300);
  std::string Complete(const std::string &prompt, double temperature) override;
  std::string name() const override { return "http:" + model_; }

 private:
  std::string endpoint_;
  std::string api_key_;
  std::string model_;
  int timeout_seconds_;
};

std::string FixturePath(const std::string &fixture_dir, const std::string &prompt);

}  // namespace ptm

#endif  // PTM_LLM_LLM_CLIENT_H_
