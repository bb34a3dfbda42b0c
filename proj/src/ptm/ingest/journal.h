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

#ifndef PTM_INGEST_JOURNAL_H_
#define PTM_INGEST_JOURNAL_H_

#include <string>
#include <string_view>
#include <vector>

#include "ptm/base/dates.h"
#include "ptm/base/json.h"

namespace ptm {

struct JournalEntry {
  std::string id;
  std::string user_id;
  Date date;
  std::string text;
  int word_count = 0;
};

struct IngestRejection {
  int line = 0;  // 1-based line in the submitted batch, 0 if not line-based
  std::string id;
  std::string reason;
};

struct IngestResult {
  std::vector<JournalEntry> corpus;  // full corpus after the merge, date-sorted
  std::vector<std::string> accepted_ids;
  std::vector<IngestRejection> rejected;
};

Json JournalToJson(const JournalEntry &e);

// Validates `lines` (one JSON object per line) against `existing`, rejecting
// per entry and continuing: malformed JSON or date, empty text, missing id,
// foreign user_id, or an id already present ("duplicate"). The merged corpus
// is sorted by (date, id).
IngestResult MergeJournalLines(const std::vector<JournalEntry> &existing,
                               const std::string &user_id, std::string_view jsonl);

// users/<id>/journals.jsonl next to the graph snapshots.
class JournalStore {
 public:
  explicit JournalStore(std::string root) : root_(std::move(root)) {}

  std::vector<JournalEntry> Load(const std::string &user_id) const;
  void Save(const std::string &user_id, const std::vector<JournalEntry> &corpus) const;
  // Parses, merges and persists. Returns the merge report.
  IngestResult Ingest(const std::string &user_id, std::string_view jsonl) const;

 private:
  std::string Path(const std::string &user_id) const;
  std::string root_;
};

}  // namespace ptm

#endif  // PTM_INGEST_JOURNAL_H_
