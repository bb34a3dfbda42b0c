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

#include "ptm/service/fixtures.h"

#include <algorithm>
#include <filesystem>

#include "ptm/base/error.h"
#include "ptm/base/hash.h"
#include "ptm/base/text.h"
#include "ptm/service/pipeline.h"

namespace ptm {

namespace {

constexpr const char *kArtifacts[] = {"graph_pre", "graph_post", "eval_pre",
                                      "eval_post", "hitl_report", "runs"};

const Json &Artifact(const FixtureOutputs &o, std::string_view name) {
  if (name == "graph_pre") return o.graph_pre;
  if (name == "graph_post") return o.graph_post;
  if (name == "eval_pre") return o.eval_pre;
  if (name == "eval_post") return o.eval_post;
  if (name == "hitl_report") return o.hitl_report;
  return o.runs;
}

int Rating(const std::string &node_id, int bonus) {
  return std::min(5, 3 + static_cast<int>(Fnv1a64(node_id) % 2) + bonus);
}

}  // namespace

SimulatedParticipant SimulatedParticipant::FromJson(const Json &doc) {
  SimulatedParticipant p;
  p.answers = doc.at("answers").get<std::vector<std::string>>();
  if (doc.contains("skip_positions")) p.skip_positions = doc.at("skip_positions").get<std::vector<int>>();
  if (p.answers.empty()) Fail(ErrorCode::kInvalidArgument, "participant needs at least one answer");
  return p;
}

FixtureOutputs RunFixtureScenario(const PipelineConfig &config, const std::string &user_id,
                                  const std::string &journals_jsonl,
                                  const SimulatedParticipant &participant,
                                  std::shared_ptr<LlmBackend> backend) {
  Pipeline pipeline(config, std::move(backend));
  FixtureOutputs out;
  IngestResult ingest = pipeline.Ingest(user_id, journals_jsonl);
  if (!ingest.rejected.empty()) {
    Fail(ErrorCode::kInvalidArgument, "fixture corpus has rejected lines",
         ingest.rejected.front().reason);
  }
  auto run = [&](PipelinePhase phase) {
    Json report = pipeline.RunPhase(user_id, phase);
    if (report.at("status") != "succeeded") {
      Fail(ErrorCode::kInternal,
           "fixture phase " + std::string(PipelinePhaseName(phase)) + " failed",
           report.at("error").dump());
    }
    report.erase("timing");
    out.runs.push_back(report);
  };
  run(PipelinePhase::kExtract);
  run(PipelinePhase::kPhase1);
  run(PipelinePhase::kPhase2);
  out.graph_pre = pipeline.GraphDocument(user_id);
  run(PipelinePhase::kEvaluatePre);
  run(PipelinePhase::kHitl);

  HitlSession session = pipeline.Session(user_id);
  for (const auto &item : session.items) {
    pipeline.RecordLikert(user_id, item.node_id, "pre_hitl", Rating(item.node_id, 0));
  }
  for (size_t i = 0; i < session.items.size(); ++i) {
    const auto &item = session.items[i];
    bool skip = std::find(participant.skip_positions.begin(), participant.skip_positions.end(),
                          static_cast<int>(i)) != participant.skip_positions.end();
    if (skip) {
      pipeline.SkipItem(user_id, item.id);
      continue;
    }
    const std::string &answer = participant.answers[i % participant.answers.size()];
    pipeline.AnswerItem(user_id, item.id, answer);
    pipeline.RecordLikert(user_id, item.node_id, "post_hitl",
                          Rating(item.node_id, WordCount(answer) > 12 ? 1 : 0));
  }
  out.hitl_report = SessionReport(pipeline.Session(user_id));
  run(PipelinePhase::kEvaluatePost);
  out.graph_post = pipeline.GraphDocument(user_id);
  out.eval_pre = pipeline.EvalReport(user_id, "pre");
  out.eval_post = pipeline.EvalReport(user_id, "post");
  return out;
}

void WriteExpectedOutputs(const std::string &dir, const FixtureOutputs &outputs) {
  for (const char *name : kArtifacts) {
    WriteFileAtomic((std::filesystem::path(dir) / (std::string(name) + ".json")).string(),
                    Artifact(outputs, name).dump(2) + "\n");
  }
}

std::vector<std::string> DiffExpectedOutputs(const std::string &dir, const FixtureOutputs &outputs) {
  std::vector<std::string> diffs;
  for (const char *name : kArtifacts) {
    std::string path = (std::filesystem::path(dir) / (std::string(name) + ".json")).string();
    if (!std::filesystem::exists(path)) {
      diffs.push_back(std::string(name) + ": expected file missing");
      continue;
    }
    std::string want = ReadFile(path);
    std::string got = Artifact(outputs, name).dump(2) + "\n";
    if (want == got) continue;
    Json patch = Json::diff(ParseJsonOrDie(want, name), Artifact(outputs, name));
    std::string first = patch.empty() ? "formatting only" : patch.front().dump();
    diffs.push_back(std::string(name) + ": " + std::to_string(patch.size()) +
                    " differences, first " + first);
  }
  return diffs;
}

}  // namespace ptm
