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

#include "ptm/prompts/prompt_library.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "ptm/base/error.h"
#include "ptm/base/hash.h"
#include "ptm/base/json.h"
#include "ptm/base/text.h"

namespace ptm {

namespace {

// Walks `body`, calling on_text for literal runs and on_slot for `{name}`.
template <typename TextFn, typename SlotFn>
void Scan(std::string_view body, TextFn on_text, SlotFn on_slot) {
  size_t i = 0;
  while (i < body.size()) {
    char c = body[i];
    if (c == '{' && i + 1 < body.size() && body[i + 1] == '{') {
      on_text("{");
      i += 2;
    } else if (c == '}' && i + 1 < body.size() && body[i + 1] == '}') {
      on_text("}");
      i += 2;
    } else if (c == '{') {
      size_t close = body.find('}', i + 1);
      if (close == std::string_view::npos) Fail(ErrorCode::kParse, "unterminated placeholder");
      on_slot(body.substr(i + 1, close - i - 1));
      i = close + 1;
    } else if (c == '}') {
      Fail(ErrorCode::kParse, "stray '}' in template");
    } else {
      size_t next = body.find_first_of("{}", i);
      if (next == std::string_view::npos) next = body.size();
      on_text(body.substr(i, next - i));
      i = next;
    }
  }
}

}  // namespace

std::vector<std::string> ScanPlaceholders(std::string_view body) {
  std::vector<std::string> names;
  Scan(body, [](std::string_view) {},
       [&](std::string_view name) {
         if (std::find(names.begin(), names.end(), name) == names.end()) {
           names.emplace_back(name);
         }
       });
  return names;
}

PromptLibrary PromptLibrary::Load(const std::string &dir) {
  namespace fs = std::filesystem;
  std::string manifest_path = (fs::path(dir) / "manifest.json").string();
  Json manifest = ParseJsonOrDie(ReadFile(manifest_path), manifest_path);
  PromptLibrary lib;
  std::string combined;
  for (const auto &entry : manifest.at("templates")) {
    PromptTemplate t;
    t.id = entry.at("id").get<std::string>();
    t.file = entry.at("file").get<std::string>();
    t.body = ReadFile((fs::path(dir) / t.file).string());
    t.sha256 = Sha256Hex(t.body);
    if (t.sha256 != entry.at("sha256").get<std::string>()) {
      Fail(ErrorCode::kFailedPrecondition, "prompt asset hash mismatch: " + t.file);
    }
    t.placeholders = ScanPlaceholders(t.body);
    if (entry.contains("placeholders") &&
        entry["placeholders"].get<std::vector<std::string>>() != t.placeholders) {
      Fail(ErrorCode::kFailedPrecondition, "placeholder list mismatch: " + t.file);
    }
    combined += t.id + ":" + t.sha256 + "\n";
    lib.templates_.emplace(t.id, std::move(t));
  }
  for (auto id : kTemplateIds) {
    if (!lib.templates_.count(std::string(id))) {
      Fail(ErrorCode::kFailedPrecondition, "manifest lacks template " + std::string(id));
    }
  }
  lib.version_hash_ = Sha256Hex(combined);
  return lib;
}

const PromptLibrary &PromptLibrary::Default() {
  static const PromptLibrary lib = [] {
    const char *env = std::getenv("PTM_PROMPT_DIR");
    return Load(env && *env ? env : PTM_DEFAULT_PROMPT_DIR);
  }();
  return lib;
}

const PromptTemplate &PromptLibrary::Get(std::string_view id) const {
  auto it = templates_.find(std::string(id));
  if (it == templates_.end()) Fail(ErrorCode::kNotFound, "unknown template: " + std::string(id));
  return it->second;
}

std::string PromptLibrary::Render(std::string_view id, const PromptVariables &vars) const {
  const PromptTemplate &t = Get(id);
  for (const auto &name : t.placeholders) {
    if (!vars.count(name)) Fail(ErrorCode::kInvalidArgument, "unbound: " + name, t.id);
  }
  for (const auto &[name, value] : vars) {
    if (std::find(t.placeholders.begin(), t.placeholders.end(), name) == t.placeholders.end()) {
      Fail(ErrorCode::kInvalidArgument, "undeclared: " + name, t.id);
    }
  }
  std::string out;
  out.reserve(t.body.size() + 256);
  Scan(t.body, [&](std::string_view text) { out.append(text); },
       [&](std::string_view name) { out.append(vars.at(std::string(name))); });
  return out;
}

}  // namespace ptm
