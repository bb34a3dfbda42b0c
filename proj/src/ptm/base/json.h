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

#ifndef PTM_BASE_JSON_H_
#define PTM_BASE_JSON_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace ptm {

// Insertion-ordered JSON keeps exported documents stable and readable.
using Json = nlohmann::ordered_json;

// Parses strictly; nullopt on any syntax error. Surrounding whitespace is the
// only thing tolerated.
std::optional<Json> TryParseJson(std::string_view text);

// Throws ptm::Error(kParse) with `what` in the message.
Json ParseJsonOrDie(std::string_view text, std::string_view what);

std::string ReadFile(const std::string &path);
// Writes to `path + ".tmp"` then renames over `path`.
void WriteFileAtomic(const std::string &path, std::string_view content);

}  // namespace ptm

#endif  // PTM_BASE_JSON_H_
