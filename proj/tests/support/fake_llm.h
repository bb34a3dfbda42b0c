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

#ifndef PTM_TESTS_SUPPORT_FAKE_LLM_H_
#define PTM_TESTS_SUPPORT_FAKE_LLM_H_

#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "ptm/base/error.h"
#include "ptm/llm/llm_client.h"

namespace ptm::testing {

// Backend driven by a function of the prompt. Records every prompt.
class FunctionBackend : public LlmBackend {
 public:
  explicit FunctionBackend(std::function<std::string(const std::string &)> fn)
      : fn_(std::move(fn)) {}

  std::string Complete(const std::string &prompt, double) override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      prompts_.push_back(prompt);
    }
    return fn_(prompt);
  }
  std::string name() const override { return "function"; }

  std::vector<std::string> prompts() const {
    std::lock_guard<std::mutex> lock(mu_);
    return prompts_;
  }

 private:
  std::function<std::string(const std::string &)> fn_;
  mutable std::mutex mu_;
  std::vector<std::string> prompts_;
};

// Returns queued replies in order; throws kUnavailable for "!unavailable".
inline std::shared_ptr<FunctionBackend> QueueBackend(std::vector<std::string> replies) {
  auto queue = std::make_shared<std::deque<std::string>>(replies.begin(), replies.end());
  return std::make_shared<FunctionBackend>([queue](const std::string &) {
    if (queue->empty()) Fail(ErrorCode::kNotFound, "queue exhausted");
    std::string r = queue->front();
    queue->pop_front();
    if (r == "!unavailable") Fail(ErrorCode::kUnavailable, "simulated outage");
    return r;
  });
}

inline LlmClientOptions FastOptions() {
  LlmClientOptions o;
  o.backoff_initial_ms = 0;
  o.keep_call_log = true;
  return o;
}

}  // namespace ptm::testing

#endif  // PTM_TESTS_SUPPORT_FAKE_LLM_H_
