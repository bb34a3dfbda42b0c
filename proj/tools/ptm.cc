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

// Command line front end: ingest journals, run pipeline phases, drive HITL,
// evaluate, export, serve the HTTP API, and record or verify replay fixtures.

#include <unistd.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ptm/base/error.h"
#include "ptm/base/json.h"
#include "ptm/graph/graph_json.h"
#include "ptm/graph/types.h"
#include "ptm/service/config.h"
#include "ptm/service/fixtures.h"
#include "ptm/service/pipeline.h"
#include "ptm/service/server.h"

namespace fs = std::filesystem;

namespace {

using ptm::Json;

struct Overrides {
  std::string config_path;
  ptm::ConfigFlags flags;
};

ptm::EnvLookup Env() {
  return [](const char *k) { return std::getenv(k); };
}

ptm::PipelineConfig ResolveConfig(const Overrides &o) {
  ptm::PipelineConfig c = ptm::LoadConfig(o.config_path, Env());
  ptm::ApplyFlags(c, o.flags);
  c.Validate();
  return c;
}

void Emit(const std::string &text, const std::string &out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    ptm::WriteFileAtomic(out_path, text);
    std::cerr << "wrote " << out_path << "\n";
  }
}

void PrintJson(const Json &j) { std::cout << j.dump(2) << "\n"; }

int RunFixtures(const Overrides &o, bool record, const std::string &user, const std::string &journals,
                const std::string &participant_path, const std::string &fixture_dir,
                std::string work_dir) {
  ptm::PipelineConfig c = ptm::LoadConfig(o.config_path, Env());
  ptm::ApplyFlags(c, o.flags);
  c.llm.mode = record ? ptm::LlmMode::kRecord : ptm::LlmMode::kReplay;
  c.llm.fixture_dir = fixture_dir;
  c.llm.temperature = 0.0;
  bool scratch = work_dir.empty();
  if (scratch) {
    work_dir = (fs::temp_directory_path() / ("ptm-fixtures-" + std::to_string(::getpid()))).string();
  }
  fs::remove_all(work_dir);
  c.data_dir = work_dir;
  auto participant = ptm::SimulatedParticipant::FromJson(
      ptm::ParseJsonOrDie(ptm::ReadFile(participant_path), "participant file"));
  ptm::FixtureOutputs out =
      ptm::RunFixtureScenario(c, user, ptm::ReadFile(journals), participant);
  if (scratch) fs::remove_all(work_dir);
  std::string expected = (fs::path(fixture_dir) / "expected").string();
  if (record) {
    ptm::WriteExpectedOutputs(expected, out);
    std::cout << "recorded fixtures into " << fixture_dir << "\n";
    return 0;
  }
  auto diffs = ptm::DiffExpectedOutputs(expected, out);
  for (const auto &d : diffs) std::cout << "DIFF " << d << "\n";
  std::cout << (diffs.empty() ? "fixtures verified: outputs identical\n" : "fixtures differ\n");
  return diffs.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Personalized Thinking Model pipeline"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config_path, "JSON config file (overrides environment)");
  app.add_option("--data-dir", o.flags.data_dir, "Data directory");
  app.add_option("--mode", o.flags.mode, "LLM mode: live, record or replay");
  app.add_option("--fixture-dir", o.flags.fixture_dir, "Replay fixture directory");
  app.add_option("--llm-backend", o.flags.llm_backend, "http or scripted");
  app.add_option("--llm-endpoint", o.flags.llm_endpoint, "Chat completions endpoint URL");
  app.add_option("--model", o.flags.model, "LLM model name");
  app.add_option("--embed-endpoint", o.flags.embed_endpoint, "Embeddings endpoint URL (empty: local)");
  app.add_option("--seed", o.flags.seed, "Random seed");

  std::string user, file, out_path, phase, condition = "pre", format = "json", layer, item, answer;
  std::optional<int> version;
  bool skip = false;

  auto *ingest = app.add_subcommand("ingest", "Add journal entries (JSONL) for a user");
  ingest->add_option("--user", user)->required();
  ingest->add_option("--file", file, "JSONL file, one entry per line")->required();

  auto *build = app.add_subcommand("build", "Run one pipeline phase");
  build->add_option("--user", user)->required();
  build->add_option("--phase", phase, "extract, phase1, phase2, evaluate_pre, hitl, evaluate_post or all")
      ->required();

  auto *hitl = app.add_subcommand("hitl", "Human-in-the-loop refinement");
  hitl->require_subcommand(1);
  std::string host;
  int port = -1;
  auto *serve = hitl->add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  auto *next = hitl->add_subcommand("next", "Show the next pending item");
  next->add_option("--user", user)->required();
  auto *ans = hitl->add_subcommand("answer", "Answer or skip an item");
  ans->add_option("--user", user)->required();
  ans->add_option("--item", item)->required();
  ans->add_option("--answer", answer);
  ans->add_flag("--skip", skip);
  auto *report = hitl->add_subcommand("report", "Print the session report");
  report->add_option("--user", user)->required();

  auto *likert = app.add_subcommand("likert", "Record a 1-5 rating for a node");
  std::string node, review_phase;
  int rating = 0;
  likert->add_option("--user", user)->required();
  likert->add_option("--node", node)->required();
  likert->add_option("--phase", review_phase, "pre_hitl or post_hitl")->required();
  likert->add_option("--rating", rating)->required();

  auto *eval = app.add_subcommand("eval", "Evaluation");
  eval->require_subcommand(1);
  auto *eval_run = eval->add_subcommand("run", "Run an evaluation");
  eval_run->add_option("--user", user)->required();
  eval_run->add_option("--condition", condition, "pre or post")->required();

  auto *exp = app.add_subcommand("export", "Export artifacts");
  exp->require_subcommand(1);
  auto *exp_graph = exp->add_subcommand("graph", "Graph snapshot as JSON");
  exp_graph->add_option("--user", user)->required();
  exp_graph->add_option("--version", version);
  exp_graph->add_option("--layer", layer, "L0..L4; whole graph when omitted");
  exp_graph->add_option("--out", out_path);
  auto *exp_report = exp->add_subcommand("report", "Evaluation report");
  exp_report->add_option("--user", user)->required();
  exp_report->add_option("--condition", condition);
  exp_report->add_option("--format", format, "json or csv");
  exp_report->add_option("--out", out_path);
  auto *exp_trace = exp->add_subcommand("trace", "A node with its sources down to L0");
  exp_trace->add_option("--user", user)->required();
  exp_trace->add_option("--node", node)->required();

  auto *fixtures = app.add_subcommand("fixtures", "Record or verify replay fixtures");
  fixtures->require_subcommand(1);
  std::string journals, participant, work_dir;
  user = "demo";
  auto add_fixture_options = [&](CLI::App *cmd) {
    cmd->add_option("--user", user);
    cmd->add_option("--journals", journals, "Corpus JSONL")->required();
    cmd->add_option("--participant", participant, "Simulated participant JSON")->required();
    cmd->add_option("--fixtures", o.flags.fixture_dir, "Fixture directory")->required();
    cmd->add_option("--work-dir", work_dir, "Keep the run's data directory here");
  };
  auto *record = fixtures->add_subcommand("record", "Run against the live (or scripted) backend and store replies");
  add_fixture_options(record);
  auto *verify = fixtures->add_subcommand("verify", "Replay and diff against the recorded outputs");
  add_fixture_options(verify);

  auto *show = app.add_subcommand("config", "Print the resolved configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*record || *verify) {
      return RunFixtures(o, record->parsed(), user, journals, participant, o.flags.fixture_dir, work_dir);
    }
    ptm::PipelineConfig config = ResolveConfig(o);
    if (*show) {
      PrintJson(ptm::ConfigToJson(config));
      return 0;
    }
    ptm::Pipeline pipeline(config);
    if (*ingest) {
      ptm::IngestResult r = pipeline.Ingest(user, ptm::ReadFile(file));
      std::cout << "accepted " << r.accepted_ids.size() << ", rejected " << r.rejected.size()
                << ", corpus size " << r.corpus.size() << "\n";
      for (const auto &x : r.rejected) std::cout << "  line " << x.line << ": " << x.reason << "\n";
      return 0;
    }
    if (*build || *eval_run) {
      std::vector<ptm::PipelinePhase> phases;
      if (*eval_run) {
        phases.push_back(condition == "post" ? ptm::PipelinePhase::kEvaluatePost
                                             : ptm::PipelinePhase::kEvaluatePre);
      } else if (phase == "all") {
        phases = {ptm::PipelinePhase::kExtract, ptm::PipelinePhase::kPhase1,
                  ptm::PipelinePhase::kPhase2, ptm::PipelinePhase::kEvaluatePre};
      } else {
        phases.push_back(ptm::ParsePipelinePhase(phase));
      }
      for (auto ph : phases) {
        Json run = pipeline.RunPhase(user, ph);
        PrintJson(run);
        if (run.at("status") != "succeeded") return 1;
      }
      return 0;
    }
    if (*serve) {
      ptm::ApiServer server(pipeline, config.server.api_token);
      int bound = server.Bind(host.empty() ? config.server.host : host,
                              port >= 0 ? port : config.server.port);
      std::cerr << "listening on " << (host.empty() ? config.server.host : host) << ":" << bound << "\n";
      server.Listen();
      return 0;
    }
    if (*next) {
      PrintJson(pipeline.NextItem(user));
      return 0;
    }
    if (*ans) {
      if (skip) {
        PrintJson(pipeline.SkipItem(user, item));
      } else {
        PrintJson(pipeline.AnswerItem(user, item, answer));
      }
      return 0;
    }
    if (*report) {
      PrintJson(ptm::SessionReport(pipeline.Session(user)));
      return 0;
    }
    if (*likert) {
      auto r = pipeline.RecordLikert(user, node, review_phase, rating);
      std::cout << "recorded " << r.rating << " for " << r.node_id << "\n";
      return 0;
    }
    if (*exp_graph) {
      Json doc = layer.empty() ? pipeline.GraphDocument(user, version)
                               : pipeline.LayerDocument(user, ptm::ParseLayer(layer), version);
      Emit(doc.dump(2) + "\n", out_path);
      return 0;
    }
    if (*exp_report) {
      Emit(format == "csv" ? pipeline.EvalCsv(user, condition)
                           : pipeline.EvalReport(user, condition).dump(2) + "\n",
           out_path);
      return 0;
    }
    if (*exp_trace) {
      PrintJson(pipeline.Trace(user, node));
      return 0;
    }
  } catch (const ptm::Error &e) {
    std::cerr << "error (" << ptm::ErrorCodeName(e.code()) << "): " << e.what();
    if (!e.detail().empty()) std::cerr << " [" << e.detail() << "]";
    std::cerr << "\n";
    return 2;
  }
  return 0;
}
