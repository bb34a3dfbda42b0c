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

#include "ptm/llm/llm_client.h"

#include <chrono>
#include <filesystem>
#include <thread>

#include "ptm/base/error.h"
#include "ptm/base/hash.h"

namespace ptm {

namespace {

bool ShapeMatches(const Json &j, ResponseShape shape) {
  switch (shape) {
    case ResponseShape::kObject: return j.is_object();
    case ResponseShape::kArray: return j.is_array();
    case ResponseShape::kText: return true;
  }
  return true;
}

// Releases a semaphore slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024> &sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }

 private:
  std::counting_semaphore<1024> &sem_;
};

}  // namespace

LlmClient::LlmClient(const PromptLibrary &library, std::shared_ptr<LlmBackend> backend,
                     LlmClientOptions options)
    : library_(library),
      backend_(std::move(backend)),
      options_(options),
      in_flight_(std::max(1, std::min(options.max_in_flight, 1024))) {}

std::string LlmClient::Render(const LlmRequest &request) const {
  if (request.temperature < 0.0 || request.temperature > 2.0) {
    Fail(ErrorCode::kInvalidArgument, "temperature out of [0, 2]");
  }
  return library_.Render(request.template_id, request.variables);
}

std::string LlmClient::CorrectiveSuffix() {
  return "\n\nYour previous reply could not be used because it was not valid JSON "
         "matching the Output Schema above. Reply again with only the JSON.";
}

std::string LlmClient::CompleteWithRetry(const std::string &template_id,
                                         const std::string &prompt, double temperature) {
  int delay = options_.backoff_initial_ms;
  for (int attempt = 0;; ++attempt) {
    try {
      std::string response;
      {
        SlotGuard slot(in_flight_);
        ++calls_;
        response = backend_->Complete(prompt, temperature);
      }
      if (options_.keep_call_log) {
        std::lock_guard<std::mutex> lock(log_mu_);
        log_.push_back({template_id, PromptKey(prompt), prompt, response});
      }
      return response;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kUnavailable || attempt >= options_.max_retries) throw;
      if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      delay *= 2;
    }
  }
}

std::string LlmClient::Send(const LlmRequest &request) {
  return CompleteWithRetry(request.template_id, Render(request), request.temperature);
}

Json LlmClient::SendJson(const LlmRequest &request, const Validator &validate) {
  std::string prompt = Render(request);
  std::string problem;
  for (int round = 0; round < 2; ++round) {
    if (round == 1) ++reasks_;
    std::string p = round == 0 ? prompt : prompt + CorrectiveSuffix();
    std::string raw = CompleteWithRetry(request.template_id, p, request.temperature);
    auto parsed = TryParseJson(raw);
    if (!parsed) {
      problem = "reply is not valid JSON";
      continue;
    }
    if (!ShapeMatches(*parsed, request.expected_shape)) {
      problem = "reply has the wrong JSON shape";
      continue;
    }
    if (validate) {
      if (auto err = validate(*parsed)) {
        problem = *err;
        continue;
      }
    }
    return *parsed;
  }
  Fail(ErrorCode::kParse, request.template_id + " failed after corrective re-ask: " + problem);
}

std::vector<LlmCallRecord> LlmClient::call_log() const {
  std::lock_guard<std::mutex> lock(log_mu_);
  return log_;
}

std::string FixturePath(const std::string &fixture_dir, const std::string &prompt) {
  return (std::filesystem::path(fixture_dir) / PromptKey(prompt)).string();
}

ReplayBackend::ReplayBackend(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

std::string ReplayBackend::Complete(const std::string &prompt, double) {
  std::string path = FixturePath(dir_, prompt);
  if (!std::filesystem::exists(path)) {
    Fail(ErrorCode::kNotFound, "fixture miss: " + PromptKey(prompt), dir_);
  }
  return ReadFile(path);
}

RecordingBackend::RecordingBackend(std::shared_ptr<LlmBackend> inner, std::string fixture_dir)
    : inner_(std::move(inner)), dir_(std::move(fixture_dir)) {
  std::filesystem::create_directories(dir_);
}

std::string RecordingBackend::Complete(const std::string &prompt, double temperature) {
  std::string response = inner_->Complete(prompt, temperature);
  std::lock_guard<std::mutex> lock(mu_);
  WriteFileAtomic(FixturePath(dir_, prompt), response);
  return response;
}

}  // namespace ptm
