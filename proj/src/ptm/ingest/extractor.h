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

#ifndef PTM_INGEST_EXTRACTOR_H_
#define PTM_INGEST_EXTRACTOR_H_

#include <string>
#include <vector>

#include "ptm/graph/types.h"
#include "ptm/ingest/journal.h"
#include "ptm/llm/llm_client.h"

namespace ptm {

struct ExtractionOutcome {
  std::string entry_id;
  std::vector<BehavioralInstance> instances;
  std::vector<std::string> dropped;  // reasons for items without WHAT
  bool failed = false;
  std::string error;
};

// Converts one E0 reply into instances for `entry`. Items lacking a non-empty
// WHAT are dropped and reported. Instance ids are "{entry_id}-{ordinal}" in
// reply order (the prompt asks for chronological order).
ExtractionOutcome InstancesFromE0Reply(const JournalEntry &entry, const Json &reply);

// Renders E0 for one entry and parses the reply. An invalid reply after the
// corrective re-ask marks the outcome failed instead of throwing.
ExtractionOutcome ExtractL0(LlmClient &client, const JournalEntry &entry);

// Extracts every entry with at most client.max_in_flight() requests in
// flight. Output order follows `entries`.
std::vector<ExtractionOutcome> ExtractCorpus(LlmClient &client,
                                             const std::vector<JournalEntry> &entries);

}  // namespace ptm

#endif  // PTM_INGEST_EXTRACTOR_H_
