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

#ifndef PTM_SERVICE_PIPELINE_H_
#define PTM_SERVICE_PIPELINE_H_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/consensus/embedding.h"
#include "ptm/eval/likert.h"
#include "ptm/graph/store.h"
#include "ptm/hitl/hitl.h"
#include "ptm/ingest/journal.h"
#include "ptm/llm/llm_client.h"
#include "ptm/service/config.h"

namespace ptm {

// Run phases in their only valid order.
enum class PipelinePhase { kExtract, kPhase1, kPhase2, kEvaluatePre, kHitl, kEvaluatePost };
std::string_view PipelinePhaseName(PipelinePhase phase);
PipelinePhase ParsePipelinePhase(std::string_view name);  // kInvalidArgument

std::shared_ptr<LlmBackend> MakeLlmBackend(const PipelineConfig &config);
std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(const PipelineConfig &config);

// Binds the stores and module operations for every user under one data
// directory. The CLI and the HTTP service both go through this class.
//
// Files per user, next to the graph snapshots:
//   runs/run-0001.json       run reports
//   eval/testset.json        QA items shared by both evaluations
//   eval/{pre,post}.json     evaluation report (+ _items.json, .csv)
class Pipeline {
 public:
  // Timestamp source for one user's events.
  using Clock = std::function<std::string(const std::string &user_id)>;

  // `backend` replaces the configured LLM backend and `clock` the default
  // timestamp source; both are for tests.
  explicit Pipeline(PipelineConfig config, std::shared_ptr<LlmBackend> backend = nullptr,
                    Clock clock = nullptr);
  ~Pipeline();

  const PipelineConfig &config() const { return config_; }
  GraphStore &graphs() { return graphs_; }
  const JournalStore &journals() const { return journals_; }
  const HitlStore &hitl_store() const { return hitl_; }
  const LikertStore &likert_store() const { return likert_; }

  // Record and replay modes stamp events with the user's latest journal
  // date so that reruns are byte-identical; live mode uses the UTC clock.
  std::string Now(const std::string &user_id) const;

  IngestResult Ingest(const std::string &user_id, std::string_view jsonl);

  // Throws kFailedPrecondition naming the missing prerequisite, or when the
  // phase already ran and cannot be repeated.
  void CheckPrerequisites(const std::string &user_id, PipelinePhase phase) const;
  // {extract: bool, phase1: bool, ...}
  Json Progress(const std::string &user_id) const;

  // Runs the phase to completion and returns its run report. Failures inside
  // the phase are recorded in the report (status "failed"); ordering errors
  // throw before any record is written.
  Json RunPhase(const std::string &user_id, PipelinePhase phase);
  // Queues the phase on a background thread; returns the run id at once.
  std::string StartRun(const std::string &user_id, PipelinePhase phase);
  Json GetRun(const std::string &user_id, const std::string &run_id) const;  // kNotFound
  void WaitForJobs();

  HitlSession Session(const std::string &user_id) const;  // kNotFound
  // {complete: true} or {complete: false, item: {...}}
  Json NextItem(const std::string &user_id) const;
  // {item, node, graph_version}; one snapshot bump when the refinement works.
  Json AnswerItem(const std::string &user_id, const std::string &item_id, const std::string &answer);
  Json SkipItem(const std::string &user_id, const std::string &item_id);

  LikertRecord RecordLikert(const std::string &user_id, const std::string &node_id,
                            std::string_view phase, int rating);

  Json GraphDocument(const std::string &user_id, std::optional<int> version = std::nullopt) const;
  Json LayerDocument(const std::string &user_id, Layer layer,
                     std::optional<int> version = std::nullopt) const;
  // Node with its sources expanded down to L0 and the flattened evidence.
  Json Trace(const std::string &user_id, const std::string &node_id) const;

  // condition is "pre" or "post"; kNotFound before that evaluation ran.
  Json EvalReport(const std::string &user_id, const std::string &condition) const;
  std::string EvalCsv(const std::string &user_id, const std::string &condition) const;

 private:
  struct RunContext;

  std::string AllocateRunId(const std::string &user_id);
  Json Execute(const std::string &user_id, PipelinePhase phase, const std::string &run_id);
  void SaveRun(const std::string &user_id, const Json &run) const;
  std::string UserPath(const std::string &user_id, const std::string &rel) const;
  std::unique_ptr<LlmClient> MakeClient() const;
  std::mutex &RunLock(const std::string &user_id);

  Json Extract(RunContext &ctx);
  Json Phase1(RunContext &ctx);
  Json Phase2(RunContext &ctx);
  Json Evaluate(RunContext &ctx, bool post);
  Json OpenHitl(RunContext &ctx);

  PipelineConfig config_;
  std::unique_ptr<PromptLibrary> owned_library_;
  const PromptLibrary *library_ = nullptr;
  std::shared_ptr<LlmBackend> backend_;
  std::unique_ptr<EmbeddingProvider> embedder_;
  Clock clock_;
  GraphStore graphs_;
  JournalStore journals_;
  HitlStore hitl_;
  LikertStore likert_;

  std::mutex mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> run_locks_;
  std::vector<std::thread> jobs_;
};

}  // namespace ptm

#endif  // PTM_SERVICE_PIPELINE_H_
