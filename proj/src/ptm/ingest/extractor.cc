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

#include "ptm/ingest/extractor.h"

#include "ptm/base/error.h"
#include "ptm/base/parallel.h"
#include "ptm/base/text.h"

namespace ptm {

namespace {

// Reads the upper-case schema key, falling back to lower case.
std::optional<std::string> Field(const Json &item, const char *upper) {
  for (std::string key : {std::string(upper), ToLower(upper)}) {
    auto it = item.find(key);
    if (it == item.end() || it->is_null()) continue;
    if (it->is_string()) return Trim(it->get<std::string>());
    return std::nullopt;
  }
  return std::string();
}

}  // namespace

ExtractionOutcome InstancesFromE0Reply(const JournalEntry &entry, const Json &reply) {
  ExtractionOutcome out;
  out.entry_id = entry.id;
  const Json &items = reply.at("informations");
  int ordinal = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const Json &item = items[i];
    if (!item.is_object()) {
      out.dropped.push_back("item " + std::to_string(i) + ": not an object");
      continue;
    }
    auto what = Field(item, "WHAT");
    if (!what || what->empty()) {
      out.dropped.push_back("item " + std::to_string(i) + ": missing WHAT");
      continue;
    }
    BehavioralInstance x;
    x.id = entry.id + "-" + std::to_string(++ordinal);
    x.what = *what;
    x.when = Field(item, "WHEN").value_or("");
    x.where = Field(item, "WHERE").value_or("");
    x.who = Field(item, "WHO").value_or("");
    x.why = Field(item, "WHY").value_or("");
    x.how = Field(item, "HOW").value_or("");
    x.date = entry.date;
    x.journal_entry_id = entry.id;
    WhenParse when = ParseWhen(x.when);
    x.weekday = when.weekday;
    x.time_window = when.window;
    out.instances.push_back(std::move(x));
  }
  return out;
}

ExtractionOutcome ExtractL0(LlmClient &client, const JournalEntry &entry) {
  LlmRequest req{"E0", {{"text", entry.text}}, 0.0, ResponseShape::kObject};
  try {
    Json reply = client.SendJson(req, [](const Json &j) -> std::optional<std::string> {
      if (!j.contains("informations") || !j["informations"].is_array()) {
        return "missing informations array";
      }
      return std::nullopt;
    });
    return InstancesFromE0Reply(entry, reply);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kParse) throw;
    ExtractionOutcome out;
    out.entry_id = entry.id;
    out.failed = true;
    out.error = e.what();
    return out;
  }
}

std::vector<ExtractionOutcome> ExtractCorpus(LlmClient &client,
                                             const std::vector<JournalEntry> &entries) {
  return BoundedParallelMap<ExtractionOutcome>(
      entries.size(), client.max_in_flight(),
      [&](size_t i) { return ExtractL0(client, entries[i]); });
}

}  // namespace ptm
