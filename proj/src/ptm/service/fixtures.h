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

#ifndef PTM_SERVICE_FIXTURES_H_
#define PTM_SERVICE_FIXTURES_H_

#include <memory>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/llm/llm_client.h"
#include "ptm/service/config.h"

namespace ptm {

// Scripted participant for the HITL part of a fixture run: answers are used
// in item order (cycling), items at `skip_positions` are skipped, and
// Likert ratings are derived from the node id and answer length.
struct SimulatedParticipant {
  std::vector<std::string> answers;
  std::vector<int> skip_positions;

  static SimulatedParticipant FromJson(const Json &doc);
};

// Every artifact compared by `fixtures verify`.
struct FixtureOutputs {
  Json graph_pre;   // export after phase2
  Json graph_post;  // export after HITL
  Json eval_pre;
  Json eval_post;
  Json hitl_report;
  Json runs = Json::array();  // run reports without their timing block
};

// Ingests `journals_jsonl` for `user_id` into config.data_dir and runs every
// phase in order, including the simulated HITL session. Throws when a phase
// fails.
FixtureOutputs RunFixtureScenario(const PipelineConfig &config, const std::string &user_id,
                                  const std::string &journals_jsonl,
                                  const SimulatedParticipant &participant,
                                  std::shared_ptr<LlmBackend> backend = nullptr);

void WriteExpectedOutputs(const std::string &dir, const FixtureOutputs &outputs);
// One line per differing artifact; empty when everything matches.
std::vector<std::string> DiffExpectedOutputs(const std::string &dir, const FixtureOutputs &outputs);

}  // namespace ptm

#endif  // PTM_SERVICE_FIXTURES_H_
