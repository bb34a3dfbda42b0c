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

#ifndef PTM_EVAL_REPORT_H_
#define PTM_EVAL_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/consensus/embedding.h"
#include "ptm/eval/harness.h"
#include "ptm/eval/likert.h"
#include "ptm/hitl/hitl.h"
#include "ptm/ingest/journal.h"

namespace ptm {

struct UserEvaluationInput {
  std::string user_id;
  LayeredGraph graph;
  std::vector<JournalEntry> journals;
  std::vector<ItemEvaluation> items;
  std::vector<LikertRecord> likert;
  std::optional<HitlSession> session;
};

// Node vocabulary of one layer (titles and contents) against the journal
// vocabulary.
double LayerJaccard(const LayeredGraph &graph, Layer layer, const std::vector<JournalEntry> &journals);

// Assembles the evaluation document for one condition ("pre" or "post").
// When `pre_report` is given, per-user F1 is paired against it.
Json BuildEvaluationReport(const std::string &condition,
                           const std::vector<UserEvaluationInput> &users, EmbeddingProvider &provider,
                           const std::optional<Json> &pre_report = std::nullopt);

// CSV sections mirroring the report tables, for diffing runs.
std::string EvaluationCsv(const Json &report);

}  // namespace ptm

#endif  // PTM_EVAL_REPORT_H_
