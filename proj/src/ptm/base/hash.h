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

#ifndef PTM_BASE_HASH_H_
#define PTM_BASE_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace ptm {

// Lowercase hex SHA-256 of the bytes.
std::string Sha256Hex(std::string_view data);

// First 16 hex digits of the SHA-256. Used as the fixture key of a prompt.
std::string PromptKey(std::string_view rendered_prompt);

// 64-bit FNV-1a. Stable across platforms; used for feature hashing.
uint64_t Fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace ptm

#endif  // PTM_BASE_HASH_H_
