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

#include "ptm/base/error.h"
#include "ptm/base/json.h"
#include "ptm/base/url.h"
#include "ptm/llm/llm_client.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace ptm {

HttpBackend::HttpBackend(std::string endpoint, std::string api_key, std::string model,
                         int timeout_seconds)
    : endpoint_(std::move(endpoint)),
      api_key_(std::move(api_key)),
      model_(std::move(model)),
      timeout_seconds_(timeout_seconds) {}

std::string HttpBackend::Complete(const std::string &prompt, double temperature) {
  // Checked per call so that read-only commands work without an endpoint.
  if (endpoint_.empty()) Fail(ErrorCode::kInvalidArgument, "LLM endpoint not configured");
  auto [base, path] = SplitUrl(endpoint_);
  httplib::Client client(base);
  client.set_read_timeout(timeout_seconds_, 0);
  client.set_connection_timeout(30, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  Json body{{"model", model_},
            {"temperature", temperature},
            {"messages", Json::array({Json{{"role", "user"}, {"content", prompt}}})}};
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    Fail(ErrorCode::kUnavailable, "LLM transport error: " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    Fail(ErrorCode::kUnavailable, "LLM endpoint returned " + std::to_string(res->status));
  }
  if (res->status != 200) {
    Fail(ErrorCode::kFailedPrecondition, "LLM endpoint returned " + std::to_string(res->status),
         res->body);
  }
  Json reply = ParseJsonOrDie(res->body, "LLM endpoint reply");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception &) {
    Fail(ErrorCode::kParse, "LLM endpoint reply lacks choices[0].message.content");
  }
}

}  // namespace ptm
