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

#ifndef PTM_PROMPTS_PROMPT_LIBRARY_H_
#define PTM_PROMPTS_PROMPT_LIBRARY_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ptm {

// The ten pipeline prompts, keyed by their short ids.
inline constexpr std::string_view kTemplateIds[] = {"E0", "IO", "GD", "CD", "ID",
                                                    "NR", "QA", "CA", "PE", "LS"};

struct PromptTemplate {
  std::string id;
  std::string file;
  std::string body;
  std::vector<std::string> placeholders;  // in order of first appearance
  std::string sha256;
};

using PromptVariables = std::map<std::string, std::string>;

// Immutable set of prompt templates loaded from a directory holding
// `manifest.json` plus one text file per template. Loading fails when a file's
// SHA-256 differs from the manifest, so any edit to an asset must be paired
// with a manifest update and shows up as a new library version.
class PromptLibrary {
 public:
  static PromptLibrary Load(const std::string &dir);
  // Loads from $PTM_PROMPT_DIR or the build-time default, once per process.
  static const PromptLibrary &Default();

  const PromptTemplate &Get(std::string_view id) const;  // kNotFound
  const std::map<std::string, PromptTemplate> &templates() const { return templates_; }

  // Single-pass substitution of `{name}` slots. `{{` and `}}` emit literal
  // braces. Every declared placeholder must be bound and every bound name
  // declared; substituted values are never re-expanded.
  std::string Render(std::string_view id, const PromptVariables &vars) const;

  // SHA-256 over the manifest's per-template hashes; changes whenever any
  // template changes.
  const std::string &version_hash() const { return version_hash_; }

 private:
  std::map<std::string, PromptTemplate> templates_;
  std::string version_hash_;
};

// Placeholder names in order of first appearance. Throws kParse on a stray
// single '}' or an unterminated '{'.
std::vector<std::string> ScanPlaceholders(std::string_view body);

}  // namespace ptm

#endif  // PTM_PROMPTS_PROMPT_LIBRARY_H_
