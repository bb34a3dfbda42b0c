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

#include "ptm/service/pipeline.h"

#include <chrono>
#include <ctime>
#include <filesystem>

#include "ptm/abstraction/abstraction.h"
#include "ptm/base/error.h"
#include "ptm/consensus/consensus.h"
#include "ptm/eval/harness.h"
#include "ptm/eval/report.h"
#include "ptm/graph/graph_json.h"
#include "ptm/ingest/extractor.h"
#include "ptm/service/scripted_backend.h"

namespace ptm {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kPhaseNames[] = {"extract",      "phase1", "phase2",
                                            "evaluate_pre", "hitl",   "evaluate_post"};

std::string UtcNow() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json ErrorJson(const Error &e) {
  return Json{{"code", ErrorCodeName(e.code())}, {"message", e.what()}, {"detail", e.detail()}};
}

[[noreturn]] void Missing(const std::string &prerequisite, const std::string &why = "") {
  Fail(ErrorCode::kFailedPrecondition,
       "missing prerequisite: " + prerequisite + (why.empty() ? "" : " (" + why + ")"),
       "missing=" + prerequisite);
}

[[noreturn]] void AlreadyRan(PipelinePhase phase) {
  Fail(ErrorCode::kFailedPrecondition,
       "phase " + std::string(PipelinePhaseName(phase)) + " already ran for this user",
       "phase=" + std::string(PipelinePhaseName(phase)));
}

Json ItemJson(const HitlSession &session, const std::string &item_id) {
  Json doc = SessionToJson(session);
  for (const Json &item : doc.at("items")) {
    if (item.at("id") == item_id) return item;
  }
  Fail(ErrorCode::kNotFound, "unknown HITL item " + item_id);
}

Json TraceTree(const LayeredGraph &graph, const std::string &id) {
  if (graph.LayerOf(id) == Layer::kL0) return InstanceToJson(graph.instance(id));
  const PtmNode &node = graph.node(id);
  Json out = NodeToJson(node);
  if (node.dimension_id) out["dimension"] = DimensionToJson(graph.dimension(*node.dimension_id));
  Json sources = Json::array();
  for (const auto &s : node.source_ids) sources.push_back(TraceTree(graph, s));
  out["sources"] = sources;
  return out;
}

}  // namespace

std::string_view PipelinePhaseName(PipelinePhase phase) {
  return kPhaseNames[static_cast<int>(phase)];
}

PipelinePhase ParsePipelinePhase(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (kPhaseNames[i] == name) return static_cast<PipelinePhase>(i);
  }
  Fail(ErrorCode::kInvalidArgument, "unknown phase: " + std::string(name),
       "expected extract, phase1, phase2, evaluate_pre, hitl or evaluate_post");
}

std::shared_ptr<LlmBackend> MakeLlmBackend(const PipelineConfig &config) {
  if (config.llm.mode == LlmMode::kReplay) {
    return std::make_shared<ReplayBackend>(config.llm.fixture_dir);
  }
  std::shared_ptr<LlmBackend> inner;
  if (config.llm.backend == "scripted") {
    inner = std::make_shared<ScriptedBackend>();
  } else {
    inner = std::make_shared<HttpBackend>(config.llm.endpoint, config.llm.api_key,
                                          config.llm.model_name);
  }
  if (config.llm.mode == LlmMode::kRecord) {
    return std::make_shared<RecordingBackend>(inner, config.llm.fixture_dir);
  }
  return inner;
}

std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(const PipelineConfig &config) {
  if (config.embedding.endpoint.empty()) {
    return std::make_unique<HashingEmbedder>(config.embedding.dim);
  }
  return std::make_unique<HttpEmbedder>(config.embedding.endpoint, config.embedding.api_key,
                                        config.embedding.model_name, config.embedding.dim);
}

struct Pipeline::RunContext {
  std::string user_id;
  LlmClient &client;
  Json dropped = Json::array();
};

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<LlmBackend> backend, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      graphs_(config_.data_dir),
      journals_(config_.data_dir),
      hitl_(config_.data_dir),
      likert_(config_.data_dir) {
  config_.Validate();
  if (config_.prompt_dir.empty()) {
    library_ = &PromptLibrary::Default();
  } else {
    owned_library_ = std::make_unique<PromptLibrary>(PromptLibrary::Load(config_.prompt_dir));
    library_ = owned_library_.get();
  }
  backend_ = backend ? std::move(backend) : MakeLlmBackend(config_);
  embedder_ = MakeEmbeddingProvider(config_);
}

Pipeline::~Pipeline() { WaitForJobs(); }

void Pipeline::WaitForJobs() {
  std::vector<std::thread> jobs;
  {
    std::lock_guard lock(mu_);
    jobs.swap(jobs_);
  }
  for (auto &t : jobs) t.join();
}

std::string Pipeline::Now(const std::string &user_id) const {
  if (clock_) return clock_(user_id);
  if (config_.llm.mode != LlmMode::kLive) {
    auto entries = journals_.Load(user_id);
    if (entries.empty()) return "1970-01-01T00:00:00Z";
    Date latest = entries.front().date;
    for (const auto &e : entries) latest = std::max(latest, e.date);
    return latest.ToString() + "T00:00:00Z";
  }
  return UtcNow();
}

std::string Pipeline::UserPath(const std::string &user_id, const std::string &rel) const {
  return (fs::path(graphs_.UserDir(user_id)) / rel).string();
}

std::mutex &Pipeline::RunLock(const std::string &user_id) {
  std::lock_guard lock(mu_);
  auto &slot = run_locks_[user_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::unique_ptr<LlmClient> Pipeline::MakeClient() const {
  LlmClientOptions options;
  options.max_in_flight = config_.llm.max_in_flight;
  options.max_retries = config_.llm.max_retries;
  return std::make_unique<LlmClient>(*library_, backend_, options);
}

IngestResult Pipeline::Ingest(const std::string &user_id, std::string_view jsonl) {
  std::lock_guard lock(RunLock(user_id));
  return journals_.Ingest(user_id, jsonl);
}

void Pipeline::CheckPrerequisites(const std::string &user_id, PipelinePhase phase) const {
  ValidateUserId(user_id);
  std::optional<LayeredGraph> graph;
  if (graphs_.LatestVersion(user_id)) graph = graphs_.Load(user_id);
  bool extracted = graph && !graph->instances().empty();
  PhaseState state = graph ? graph->phase_state() : PhaseState::kIngested;
  bool pre_done = fs::exists(UserPath(user_id, "eval/pre.json"));
  bool hitl_open = hitl_.Has(user_id);
  switch (phase) {
    case PipelinePhase::kExtract:
      if (extracted) AlreadyRan(phase);
      if (journals_.Load(user_id).empty()) Missing("journals", "ingest entries first");
      return;
    case PipelinePhase::kPhase1:
      if (!extracted) Missing("extract");
      if (state != PhaseState::kIngested) AlreadyRan(phase);
      return;
    case PipelinePhase::kPhase2:
      if (state == PhaseState::kIngested) Missing(extracted ? "phase1" : "extract");
      if (state != PhaseState::kL1Built) AlreadyRan(phase);
      return;
    case PipelinePhase::kEvaluatePre:
      if (state == PhaseState::kIngested || state == PhaseState::kL1Built) Missing("phase2");
      if (hitl_open || state == PhaseState::kRefined) AlreadyRan(phase);
      return;
    case PipelinePhase::kHitl:
      if (!pre_done) Missing("evaluate_pre");
      if (hitl_open) AlreadyRan(phase);
      return;
    case PipelinePhase::kEvaluatePost: {
      if (!hitl_open) Missing("hitl");
      HitlSession s = hitl_.Load(user_id);
      int pending = 0;
      for (const auto &i : s.items) pending += i.status == ItemStatus::kPending;
      if (pending > 0) Missing("hitl", std::to_string(pending) + " items still pending");
      return;
    }
  }
}

Json Pipeline::Progress(const std::string &user_id) const {
  Json out = Json::object();
  for (int i = 0; i < 6; ++i) {
    auto phase = static_cast<PipelinePhase>(i);
    bool done = false;
    try {
      if (phase == PipelinePhase::kEvaluatePre || phase == PipelinePhase::kEvaluatePost) {
        done = fs::exists(UserPath(user_id, phase == PipelinePhase::kEvaluatePre ? "eval/pre.json"
                                                                                 : "eval/post.json"));
      } else if (phase == PipelinePhase::kHitl) {
        done = hitl_.Has(user_id) && hitl_.Load(user_id).Complete();
      } else {
        // A phase is done when it can no longer run because it already did.
        CheckPrerequisites(user_id, phase);
      }
    } catch (const Error &e) {
      done = e.detail().rfind("phase=", 0) == 0;
    }
    out[std::string(kPhaseNames[i])] = done;
  }
  return out;
}

void Pipeline::SaveRun(const std::string &user_id, const Json &run) const {
  WriteFileAtomic(UserPath(user_id, "runs/" + run.at("run_id").get<std::string>() + ".json"),
                  run.dump(2) + "\n");
}

std::string Pipeline::AllocateRunId(const std::string &user_id) {
  std::lock_guard lock(mu_);
  fs::path dir = UserPath(user_id, "runs");
  int n = 0;
  if (fs::exists(dir)) {
    for (const auto &e : fs::directory_iterator(dir)) {
      n += e.path().extension() == ".json" && e.path().filename().string().rfind("run-", 0) == 0;
    }
  }
  char id[32];
  std::snprintf(id, sizeof id, "run-%04d", n + 1);
  fs::create_directories(dir);
  WriteFileAtomic((dir / (std::string(id) + ".json")).string(),
                  Json{{"run_id", id}, {"user_id", user_id}, {"status", "queued"}}.dump(2) + "\n");
  return id;
}

Json Pipeline::RunPhase(const std::string &user_id, PipelinePhase phase) {
  CheckPrerequisites(user_id, phase);
  return Execute(user_id, phase, AllocateRunId(user_id));
}

std::string Pipeline::StartRun(const std::string &user_id, PipelinePhase phase) {
  CheckPrerequisites(user_id, phase);
  std::string run_id = AllocateRunId(user_id);
  SaveRun(user_id, Json{{"run_id", run_id},
                        {"user_id", user_id},
                        {"phase", PipelinePhaseName(phase)},
                        {"status", "queued"}});
  std::lock_guard lock(mu_);
  jobs_.emplace_back([this, user_id, phase, run_id] { Execute(user_id, phase, run_id); });
  return run_id;
}

Json Pipeline::GetRun(const std::string &user_id, const std::string &run_id) const {
  if (run_id.find('/') != std::string::npos || run_id.find("..") != std::string::npos) {
    Fail(ErrorCode::kInvalidArgument, "bad run id");
  }
  std::string path = UserPath(user_id, "runs/" + run_id + ".json");
  if (!fs::exists(path)) Fail(ErrorCode::kNotFound, "unknown run " + run_id);
  return ParseJsonOrDie(ReadFile(path), "run report");
}

Json Pipeline::Execute(const std::string &user_id, PipelinePhase phase, const std::string &run_id) {
  Json run{{"run_id", run_id},
           {"user_id", user_id},
           {"phase", PipelinePhaseName(phase)},
           {"status", "running"}};
  std::string started_at = UtcNow();
  auto t0 = std::chrono::steady_clock::now();
  SaveRun(user_id, run);
  std::lock_guard lock(RunLock(user_id));
  auto client = MakeClient();
  RunContext ctx{user_id, *client};
  int before = graphs_.LatestVersion(user_id).value_or(0);
  try {
    CheckPrerequisites(user_id, phase);
    Json counts;
    switch (phase) {
      case PipelinePhase::kExtract: counts = Extract(ctx); break;
      case PipelinePhase::kPhase1: counts = Phase1(ctx); break;
      case PipelinePhase::kPhase2: counts = Phase2(ctx); break;
      case PipelinePhase::kEvaluatePre: counts = Evaluate(ctx, false); break;
      case PipelinePhase::kHitl: counts = OpenHitl(ctx); break;
      case PipelinePhase::kEvaluatePost: counts = Evaluate(ctx, true); break;
    }
    run["status"] = "succeeded";
    run["counts"] = counts;
  } catch (const Error &e) {
    run["status"] = "failed";
    run["error"] = ErrorJson(e);
  } catch (const std::exception &e) {
    run["status"] = "failed";
    run["error"] = ErrorJson(Error(ErrorCode::kInternal, e.what()));
  }
  run["dropped"] = ctx.dropped;
  run["graph_version_before"] = before;
  run["graph_version_after"] = graphs_.LatestVersion(user_id).value_or(0);
  run["llm"] = Json{{"calls", client->call_count()}, {"reasks", client->reask_count()}};
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  run["timing"] = Json{{"started_at", started_at}, {"finished_at", UtcNow()}, {"duration_ms", ms.count()}};
  SaveRun(user_id, run);
  return run;
}

Json Pipeline::Extract(RunContext &ctx) {
  auto entries = journals_.Load(ctx.user_id);
  auto outcomes = ExtractCorpus(ctx.client, entries);
  GraphEdit edit;
  int failed = 0, dropped = 0;
  for (const auto &o : outcomes) {
    edit.instances.insert(edit.instances.end(), o.instances.begin(), o.instances.end());
    for (const auto &d : o.dropped) ctx.dropped.push_back("entry " + o.entry_id + ": " + d);
    dropped += static_cast<int>(o.dropped.size());
    if (o.failed) {
      ++failed;
      ctx.dropped.push_back("entry " + o.entry_id + ": extraction failed: " + o.error);
    }
  }
  if (edit.instances.empty()) {
    Fail(ErrorCode::kFailedPrecondition, "extraction produced no instances");
  }
  edit.phase_state = PhaseState::kIngested;
  edit.generated_at = Now(ctx.user_id);
  size_t n = edit.instances.size();
  graphs_.Update(ctx.user_id, [&edit](const LayeredGraph &g) { return g.Apply(edit); });
  return Json{{"entries", entries.size()},
              {"instances", n},
              {"failed_entries", failed},
              {"dropped_items", dropped}};
}

Json Pipeline::Phase1(RunContext &ctx) {
  Phase1Report report;
  std::string now = Now(ctx.user_id);
  LayeredGraph g = graphs_.Update(ctx.user_id, [&](const LayeredGraph &current) {
    return BuildL1(current, ctx.client, *embedder_, config_.consensus, now, &report);
  });
  int failed = 0;
  for (const auto &s : report.syntheses) {
    for (const auto &d : s.dropped) ctx.dropped.push_back(d);
    if (s.failed) {
      ++failed;
      ctx.dropped.push_back("cluster synthesis failed: " + s.error);
    }
  }
  WriteFileAtomic(UserPath(ctx.user_id, "consensus.csv"), ConsensusCsv(report.matrix));
  return Json{{"instances", report.matrix.size()},
              {"clusters", report.clusters.clusters.size()},
              {"unclustered_instances", report.clusters.unclustered.size()},
              {"l1_nodes", g.CountAt(Layer::kL1)},
              {"failed_syntheses", failed}};
}

Json Pipeline::Phase2(RunContext &ctx) {
  Phase2Report report;
  std::string now = Now(ctx.user_id);
  LayeredGraph g = graphs_.UpdateSeries(
      ctx.user_id, [&](const LayeredGraph &current, const GraphStore::Sink &sink) {
        BuildHigherLayers(current, ctx.client, config_.abstraction, now, sink, &report);
      });
  Json layers = Json::object();
  for (const auto &layer : report.layers) {
    int clusters = 0, failed = 0;
    for (const auto &c : layer.clusterings) {
      clusters += static_cast<int>(c.clusters.size());
      for (const auto &d : c.dropped) ctx.dropped.push_back(d);
      if (c.failed) {
        ++failed;
        ctx.dropped.push_back("dimension clustering failed: " + c.error);
      }
    }
    for (const auto &s : layer.syntheses) {
      for (const auto &d : s.dropped) ctx.dropped.push_back(d);
      if (s.failed) {
        ++failed;
        ctx.dropped.push_back("cluster synthesis failed: " + s.error);
      }
    }
    layers[std::string(LayerName(layer.layer))] =
        Json{{"clusters", clusters}, {"nodes", layer.node_count}, {"failed_calls", failed}};
  }
  return Json{{"sampled_l1_nodes", report.sample_ids.size()},
              {"dimensions", report.dimensions.size()},
              {"layers", layers},
              {"graph_version", g.version()}};
}

Json Pipeline::Evaluate(RunContext &ctx, bool post) {
  const std::string condition = post ? "post" : "pre";
  LayeredGraph graph = graphs_.Load(ctx.user_id);
  auto journals = journals_.Load(ctx.user_id);
  std::string testset_path = UserPath(ctx.user_id, "eval/testset.json");
  std::vector<QaItem> items;
  if (fs::exists(testset_path)) {
    for (const Json &j : ParseJsonOrDie(ReadFile(testset_path), "testset")) {
      items.push_back(QaItemFromJson(j));
    }
  } else {
    if (post) Missing("evaluate_pre", "no testset");
    items = GenerateTestset(ctx.client, journals, config_.eval.testset);
    Json doc = Json::array();
    for (const auto &i : items) doc.push_back(QaItemToJson(i));
    WriteFileAtomic(testset_path, doc.dump(2) + "\n");
  }
  auto evaluated = EvaluateItems(ctx.client, graph, items, config_.eval.num_target_labels);
  UserEvaluationInput input;
  input.user_id = ctx.user_id;
  input.graph = graph;
  input.journals = journals;
  input.items = evaluated;
  input.likert = likert_.Load(ctx.user_id);
  if (post) input.session = hitl_.Load(ctx.user_id);
  std::optional<Json> pre;
  if (post) pre = EvalReport(ctx.user_id, "pre");
  Json report = BuildEvaluationReport(condition, {input}, *embedder_, pre);

  Json detail = Json::array();
  int by_outcome[3] = {0, 0, 0};
  for (const auto &e : evaluated) {
    detail.push_back(ItemEvaluationToJson(e));
    ++by_outcome[static_cast<int>(e.outcome)];
    if (!e.error.empty()) ctx.dropped.push_back("item " + e.item.id + ": " + e.error);
  }
  WriteFileAtomic(UserPath(ctx.user_id, "eval/" + condition + ".json"), report.dump(2) + "\n");
  WriteFileAtomic(UserPath(ctx.user_id, "eval/" + condition + "_items.json"), detail.dump(2) + "\n");
  WriteFileAtomic(UserPath(ctx.user_id, "eval/" + condition + ".csv"), EvaluationCsv(report));
  return Json{{"condition", condition},
              {"items", items.size()},
              {"evaluated", by_outcome[0]},
              {"unanswered", by_outcome[1]},
              {"unevaluated", by_outcome[2]},
              {"f1", report.at("overall").at("f1")},
              {"graph_version", graph.version()}};
}

Json Pipeline::OpenHitl(RunContext &ctx) {
  LayeredGraph graph = graphs_.Load(ctx.user_id);
  HitlSession session = OpenSession(graph, ctx.client, config_.hitl_session_size, config_.seed);
  hitl_.Save(session);
  Json per_layer = Json::object();
  int fallback = 0;
  for (int l = 1; l <= 4; ++l) per_layer["L" + std::to_string(l)] = 0;
  for (const auto &i : session.items) {
    per_layer[std::string(LayerName(i.layer))] = per_layer[std::string(LayerName(i.layer))].get<int>() + 1;
    fallback += i.fallback_question;
  }
  for (const auto &w : session.warnings) ctx.dropped.push_back(w);
  return Json{{"items", session.items.size()}, {"items_by_layer", per_layer}, {"fallback_questions", fallback}};
}

HitlSession Pipeline::Session(const std::string &user_id) const { return hitl_.Load(user_id); }

Json Pipeline::NextItem(const std::string &user_id) const {
  HitlSession s = hitl_.Load(user_id);
  const FactCheckItem *next = s.NextPending();
  if (next == nullptr) return Json{{"complete", true}};
  return Json{{"complete", false}, {"item", ItemJson(s, next->id)}};
}

Json Pipeline::AnswerItem(const std::string &user_id, const std::string &item_id,
                          const std::string &answer) {
  std::lock_guard lock(RunLock(user_id));
  HitlSession session = hitl_.Load(user_id);
  auto client = MakeClient();
  std::string now = Now(user_id);
  LayeredGraph after = graphs_.Update(user_id, [&](const LayeredGraph &g) {
    return SubmitAnswer(session, g, *client, item_id, answer, now);
  });
  hitl_.Save(session);
  const FactCheckItem *item = session.Find(item_id);
  return Json{{"item", ItemJson(session, item_id)},
              {"node", NodeToJson(after.node(item->node_id))},
              {"graph_version", after.version()}};
}

Json Pipeline::SkipItem(const std::string &user_id, const std::string &item_id) {
  std::lock_guard lock(RunLock(user_id));
  HitlSession session = hitl_.Load(user_id);
  ::ptm::SkipItem(session, item_id);
  hitl_.Save(session);
  return Json{{"item", ItemJson(session, item_id)}};
}

LikertRecord Pipeline::RecordLikert(const std::string &user_id, const std::string &node_id,
                                    std::string_view phase, int rating) {
  LayeredGraph graph = graphs_.Load(user_id);
  const PtmNode &node = graph.node(node_id);
  LikertRecord record{user_id, node_id, node.layer, ParseReviewPhase(phase), rating};
  likert_.Record(record);
  return record;
}

Json Pipeline::GraphDocument(const std::string &user_id, std::optional<int> version) const {
  return GraphToJson(graphs_.Load(user_id, version));
}

Json Pipeline::LayerDocument(const std::string &user_id, Layer layer,
                             std::optional<int> version) const {
  return LayerToJson(graphs_.Load(user_id, version), layer);
}

Json Pipeline::Trace(const std::string &user_id, const std::string &node_id) const {
  LayeredGraph graph = graphs_.Load(user_id);
  if (!graph.Contains(node_id)) Fail(ErrorCode::kNotFound, "unknown node " + node_id);
  Json evidence = Json::array();
  for (const auto &x : TraceToEvidence(graph, node_id)) evidence.push_back(InstanceToJson(x));
  return Json{{"node", TraceTree(graph, node_id)}, {"evidence", evidence}};
}

Json Pipeline::EvalReport(const std::string &user_id, const std::string &condition) const {
  if (condition != "pre" && condition != "post") {
    Fail(ErrorCode::kInvalidArgument, "condition must be pre or post");
  }
  std::string path = UserPath(user_id, "eval/" + condition + ".json");
  if (!fs::exists(path)) Fail(ErrorCode::kNotFound, "no " + condition + " evaluation for user " + user_id);
  return ParseJsonOrDie(ReadFile(path), "evaluation report");
}

std::string Pipeline::EvalCsv(const std::string &user_id, const std::string &condition) const {
  EvalReport(user_id, condition);
  return ReadFile(UserPath(user_id, "eval/" + condition + ".csv"));
}

}  // namespace ptm
