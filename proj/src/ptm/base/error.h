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

#ifndef PTM_BASE_ERROR_H_
#define PTM_BASE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptm {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kAlreadyExists,
  kFailedPrecondition,
  kParse,
  kUnavailable,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported as ptm::Error. The code drives the HTTP
// status mapping in the service layer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, std::string detail = "")
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const { return code_; }
  const std::string &detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string &message,
                              std::string detail = "") {
  throw Error(code, message, std::move(detail));
}

}  // namespace ptm

#endif  // PTM_BASE_ERROR_H_
