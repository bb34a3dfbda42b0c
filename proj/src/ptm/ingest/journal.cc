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

#include "ptm/ingest/journal.h"

#include <algorithm>
#include <filesystem>
#include <set>

#include "ptm/base/error.h"
#include "ptm/base/text.h"
#include "ptm/graph/graph.h"
#include "ptm/graph/store.h"

namespace ptm {

Json JournalToJson(const JournalEntry &e) {
  return Json{{"id", e.id}, {"user_id", e.user_id}, {"date", e.date.ToString()}, {"text", e.text}};
}

IngestResult MergeJournalLines(const std::vector<JournalEntry> &existing,
                               const std::string &user_id, std::string_view jsonl) {
  IngestResult result;
  result.corpus = existing;
  std::set<std::string> ids;
  for (const auto &e : existing) ids.insert(e.id);

  int line_no = 0;
  size_t pos = 0;
  while (pos <= jsonl.size()) {
    size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string line = Trim(jsonl.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == jsonl.size()) break;
      continue;
    }
    auto reject = [&](std::string id, std::string reason) {
      result.rejected.push_back({line_no, std::move(id), std::move(reason)});
    };
    auto parsed = TryParseJson(line);
    if (!parsed || !parsed->is_object()) {
      reject("", "malformed JSON");
      continue;
    }
    const Json &j = *parsed;
    std::string id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : "";
    if (Trim(id).empty()) {
      reject("", "missing id");
      continue;
    }
    std::string uid = j.contains("user_id") && j["user_id"].is_string()
                          ? j["user_id"].get<std::string>()
                          : user_id;
    if (uid != user_id) {
      reject(id, "user_id mismatch");
      continue;
    }
    auto date = j.contains("date") && j["date"].is_string()
                    ? Date::Parse(j["date"].get<std::string>())
                    : std::nullopt;
    if (!date) {
      reject(id, "malformed date");
      continue;
    }
    std::string text = j.contains("text") && j["text"].is_string() ? j["text"].get<std::string>() : "";
    if (Trim(text).empty()) {
      reject(id, "empty text");
      continue;
    }
    if (!ids.insert(id).second) {
      reject(id, "duplicate");
      continue;
    }
    result.corpus.push_back({id, user_id, *date, text, WordCount(text)});
    result.accepted_ids.push_back(id);
    if (end == jsonl.size()) break;
  }
  std::stable_sort(result.corpus.begin(), result.corpus.end(),
                   [](const JournalEntry &a, const JournalEntry &b) {
                     if (a.date != b.date) return a.date < b.date;
                     return NaturalLess(a.id, b.id);
                   });
  return result;
}

std::string JournalStore::Path(const std::string &user_id) const {
  ValidateUserId(user_id);
  return (std::filesystem::path(root_) / "users" / user_id / "journals.jsonl").string();
}

std::vector<JournalEntry> JournalStore::Load(const std::string &user_id) const {
  std::string path = Path(user_id);
  if (!std::filesystem::exists(path)) return {};
  IngestResult r = MergeJournalLines({}, user_id, ReadFile(path));
  if (!r.rejected.empty()) {
    Fail(ErrorCode::kInternal, "stored corpus is corrupt at line " +
                                   std::to_string(r.rejected.front().line) + ": " +
                                   r.rejected.front().reason);
  }
  return r.corpus;
}

void JournalStore::Save(const std::string &user_id, const std::vector<JournalEntry> &corpus) const {
  std::string out;
  for (const auto &e : corpus) out += JournalToJson(e).dump() + "\n";
  WriteFileAtomic(Path(user_id), out);
}

IngestResult JournalStore::Ingest(const std::string &user_id, std::string_view jsonl) const {
  IngestResult r = MergeJournalLines(Load(user_id), user_id, jsonl);
  if (!r.accepted_ids.empty()) Save(user_id, r.corpus);
  return r;
}

}  // namespace ptm
