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

#include "ptm/base/json.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptm/base/error.h"

namespace ptm {

std::optional<Json> TryParseJson(std::string_view text) {
  Json j = Json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

Json ParseJsonOrDie(std::string_view text, std::string_view what) {
  auto j = TryParseJson(text);
  if (!j) Fail(ErrorCode::kParse, "invalid JSON in " + std::string(what));
  return *j;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kNotFound, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const std::string &path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kUnavailable, "cannot write " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) Fail(ErrorCode::kUnavailable, "short write to " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) Fail(ErrorCode::kUnavailable, "rename failed for " + path + ": " + ec.message());
}

}  // namespace ptm
