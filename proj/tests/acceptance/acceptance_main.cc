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

// Acceptance checks for the pipeline. Prints one PASS/FAIL line per
// criterion and exits non-zero when any fails.

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ptm/base/json.h"
#include "ptm/consensus/consensus.h"
#include "ptm/eval/scores.h"
#include "ptm/eval/semantics.h"
#include "ptm/eval/stats.h"
#include "ptm/eval/vocabulary.h"
#include "ptm/graph/graph.h"
#include "ptm/graph/graph_json.h"
#include "ptm/hitl/hitl.h"
#include "ptm/llm/llm_client.h"
#include "ptm/prompts/prompt_library.h"
#include "ptm/service/config.h"
#include "ptm/service/fixtures.h"
#include "ptm/service/pipeline.h"
#include "support/consensus_oracle.h"
#include "support/fixtures.h"

namespace ptm {
namespace {

using testing::AsSets;
using testing::AssetPath;
using testing::ConsensusCase;
using testing::OracleComponents;
using testing::OraclePair;
using testing::PairScore;
using testing::RandomConsensusCase;
using testing::ScratchDir;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of one criterion.
class Checker {
 public:
  void Expect(bool ok, const std::string &what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_.push_back(what);
  }
  Outcome Done(const std::string &summary) const {
    if (failures_ == 0) return {true, summary};
    std::string d = std::to_string(failures_) + " violation(s): ";
    for (size_t i = 0; i < messages_.size(); ++i) d += (i ? "; " : "") + messages_[i];
    return {false, d};
  }

 private:
  int failures_ = 0;
  std::vector<std::string> messages_;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

// Clusters as sets including singletons, for refinement checks.
std::vector<std::set<std::string>> Partition(const ClusterSet &cs) {
  std::vector<std::set<std::string>> out;
  for (const auto &c : cs.clusters) out.emplace_back(c.begin(), c.end());
  for (const auto &id : cs.unclustered) out.push_back({id});
  return out;
}

Outcome ConsensusOracle() {
  Checker check;
  std::mt19937_64 rng(20260101);
  ConsensusConfig config;
  auto start = std::chrono::steady_clock::now();
  for (int k = 0; k < 1000; ++k) {
    ConsensusCase c = RandomConsensusCase(rng);
    ConsensusMatrix m = BuildConsensus(c.assignments, c.dates, config);
    check.Expect(m.size() == c.dates.size(), "case " + std::to_string(k) + ": size");
    for (size_t i = 0; i < m.size(); ++i) {
      for (size_t j = 0; j < m.size(); ++j) {
        if (i == j) continue;
        PairScore o = OraclePair(c, m.ids[i], m.ids[j], config);
        check.Expect(m.r(i, j) == o.r && m.p(i, j) == o.p && m.s(i, j) == o.s,
                     "case " + std::to_string(k) + ": pair " + m.ids[i] + "/" + m.ids[j]);
      }
    }
    check.Expect(AsSets(FormClusters(m, config.tau)) == OracleComponents(m, config.tau),
                 "case " + std::to_string(k) + ": components differ");
  }
  double secs = Seconds(start);
  check.Expect(secs < 10.0, "runtime " + Fmt(secs, 2) + " s");
  return check.Done("1000 cases exact, " + Fmt(secs, 2) + " s");
}

Outcome ConsensusBounds() {
  Checker check;
  std::mt19937_64 rng(777);
  ConsensusConfig config;
  for (int k = 0; k < 300; ++k) {
    ConsensusCase c = RandomConsensusCase(rng);
    ConsensusMatrix m = BuildConsensus(c.assignments, c.dates, config);
    for (size_t i = 0; i < m.size(); ++i) {
      for (size_t j = 0; j < m.size(); ++j) {
        if (i == j) continue;
        check.Expect(m.s(i, j) == m.s(j, i), "asymmetric S");
        check.Expect(m.r(i, j) >= 0 && m.r(i, j) <= 7, "R out of [0,7]");
        check.Expect(m.p(i, j) == 0 || m.p(i, j) == 2, "P not in {0,2}");
        check.Expect(m.s(i, j) >= -2 && m.s(i, j) <= 7, "S out of [-2,7]");
      }
    }
    for (int tau = 1; tau < 7; ++tau) {
      auto coarse = Partition(FormClusters(m, tau));
      for (const auto &fine : Partition(FormClusters(m, tau + 1))) {
        bool nested = std::any_of(coarse.begin(), coarse.end(), [&](const auto &c) {
          return std::includes(c.begin(), c.end(), fine.begin(), fine.end());
        });
        check.Expect(nested, "tau " + std::to_string(tau + 1) + " merged clusters");
      }
    }
  }
  return check.Done("300 cases, tau 1..7 nested");
}

Outcome WorkedPairs() {
  Checker check;
  ConsensusConfig config;
  std::map<std::string, Date> dates{{"a", Date::ParseOrDie("2025-03-01")},
                                    {"b", Date::ParseOrDie("2025-03-02")}};
  std::vector<AttributeAssignment> agree;
  for (Attribute attr : kAttributes) agree.push_back({attr, {{"a", 0}, {"b", 0}}, false});
  ConsensusMatrix m1 = BuildConsensus(agree, dates, config);
  check.Expect(m1.r(0, 1) == 7 && m1.p(0, 1) == 0 && m1.s(0, 1) == 7,
               "all-agree pair S=" + std::to_string(m1.s(0, 1)));
  check.Expect(FormClusters(m1, config.tau).clusters.size() == 1, "all-agree pair not clustered");

  dates["b"] = dates["a"];
  std::vector<AttributeAssignment> partial;
  for (Attribute attr : kAttributes) {
    bool shared = attr == Attribute::kWhat || attr == Attribute::kWhen;
    partial.push_back({attr, {{"a", 0}, {"b", shared ? 0 : 1}}, false});
  }
  ConsensusMatrix m2 = BuildConsensus(partial, dates, config);
  check.Expect(m2.r(0, 1) == 3 && m2.p(0, 1) == 2 && m2.s(0, 1) == 1,
               "what+when same-date pair S=" + std::to_string(m2.s(0, 1)));
  check.Expect(FormClusters(m2, config.tau).clusters.empty(), "what+when pair clustered");
  return check.Done("S=7 above tau, S=1 below tau");
}

Outcome ScoreArithmeticRows() {
  Checker check;
  auto pp = [](double v) { return v * 100.0; };
  Prf a = ComputePrf({3628, 1376, 1098});
  check.Expect(std::fabs(pp(a.precision) - 72.50) <= 0.01, "P " + Fmt(pp(a.precision), 3));
  check.Expect(std::fabs(pp(a.recall) - 76.77) <= 0.01, "R " + Fmt(pp(a.recall), 3));
  check.Expect(std::fabs(pp(a.f1) - 74.57) <= 0.01, "F1 " + Fmt(pp(a.f1), 3));
  Prf b = ComputePrf({3638, 1299, 1065});
  check.Expect(std::fabs(pp(b.f1) - 75.48) <= 0.01, "F1 " + Fmt(pp(b.f1), 3));
  return check.Done("P=" + Fmt(pp(a.precision), 2) + " R=" + Fmt(pp(a.recall), 2) +
                    " F1=" + Fmt(pp(a.f1), 2) + "; F1=" + Fmt(pp(b.f1), 2));
}

Outcome MetricProperties() {
  Checker check;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> count(0, 5000);
  for (int k = 0; k < 10000; ++k) {
    Counts c{count(rng), count(rng), count(rng)};
    if (c.tp == 0) c.tp = 1;
    Prf r = ComputePrf(c);
    double lo = std::min(r.precision, r.recall), hi = std::max(r.precision, r.recall);
    check.Expect(r.f1 >= lo - 1e-12 && r.f1 <= hi + 1e-12, "F1 outside [min,max]");
    check.Expect(r.f1 <= (r.precision + r.recall) / 2 + 1e-12, "F1 above arithmetic mean");
  }

  std::uniform_int_distribution<int> word(0, 30), size(1, 12);
  for (int k = 0; k < 2000; ++k) {
    std::set<std::string> a, b;
    for (int i = size(rng); i > 0; --i) a.insert("w" + std::to_string(word(rng)));
    for (int i = size(rng); i > 0; --i) b.insert("w" + std::to_string(word(rng)));
    double ab = Jaccard(a, b);
    check.Expect(ab == Jaccard(b, a), "Jaccard asymmetric");
    check.Expect(ab >= 0 && ab <= 1, "Jaccard out of [0,1]");
    check.Expect(Jaccard(a, a) == 1.0, "Jaccard(A,A) != 1");
  }

  std::vector<double> pts = {0, 1, 10, 11};
  std::vector<double> d(16);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) d[i * 4 + j] = std::fabs(pts[i] - pts[j]);
  double want = ((1 - 1 / 10.5) + (1 - 1 / 9.5)) / 2;
  auto sil = Silhouette(d, 4, {0, 0, 1, 1});
  check.Expect(sil && std::fabs(*sil - want) <= 1e-9, "silhouette fixture");
  std::uniform_real_distribution<double> coord(0, 10);
  for (int k = 0; k < 500; ++k) {
    size_t n = 6;
    std::vector<double> x(n);
    for (auto &v : x) v = coord(rng);
    std::vector<double> dist(n * n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) dist[i * n + j] = std::fabs(x[i] - x[j]);
    std::vector<int> labels{0, 0, 1, 1, 2, static_cast<int>(k % 3)};
    if (auto s = Silhouette(dist, n, labels)) check.Expect(*s >= -1 && *s <= 1, "silhouette bounds");
  }

  std::vector<double> x{1, 2, 3, 4, 5, 6.5}, y;
  for (double v : x) y.push_back(2 * v + 1);
  auto r = PearsonR(x, y);
  check.Expect(r.statistic && std::fabs(*r.statistic - 1.0) <= 1e-12, "pearson(x,2x+1) != 1");
  auto t = PairedT(x, x);
  check.Expect(t.statistic && *t.statistic == 0.0 && t.p && *t.p == 1.0, "paired_t(x,x)");
  return check.Done("F1 x10000, Jaccard x2000, silhouette, pearson, paired_t");
}

// Captures every prompt sent during a run.
class CapturingBackend : public LlmBackend {
 public:
  explicit CapturingBackend(std::shared_ptr<LlmBackend> inner) : inner_(std::move(inner)) {}
  std::string Complete(const std::string &prompt, double temperature) override {
    {
      std::lock_guard lock(mu_);
      prompts_.push_back(prompt);
    }
    return inner_->Complete(prompt, temperature);
  }
  std::string name() const override { return inner_->name(); }
  std::vector<std::string> prompts() const {
    std::lock_guard lock(mu_);
    return prompts_;
  }

 private:
  std::shared_ptr<LlmBackend> inner_;
  mutable std::mutex mu_;
  std::vector<std::string> prompts_;
};

// State shared by the criteria that inspect the replayed fixture run.
struct FixtureRun {
  bool ok = false;
  std::string error;
  double seconds = 0;
  FixtureOutputs outputs;
  std::string eval_pre_bytes, eval_post_bytes;
  std::vector<std::string> prompts;
};

PipelineConfig ReplayConfig(const std::string &data_dir) {
  PipelineConfig c;
  c.data_dir = data_dir;
  c.llm.mode = LlmMode::kReplay;
  c.llm.fixture_dir = AssetPath("fixtures/replay");
  c.Validate();
  return c;
}

FixtureRun ReplayOnce() {
  FixtureRun run;
  ScratchDir dir;
  try {
    PipelineConfig config = ReplayConfig(dir.str());
    auto backend = std::make_shared<CapturingBackend>(MakeLlmBackend(config));
    SimulatedParticipant participant = SimulatedParticipant::FromJson(
        ParseJsonOrDie(ReadFile(AssetPath("corpus/participant.json")), "participant"));
    auto start = std::chrono::steady_clock::now();
    run.outputs = RunFixtureScenario(config, "demo", ReadFile(AssetPath("corpus/journals.jsonl")),
                                     participant, backend);
    run.seconds = Seconds(start);
    run.eval_pre_bytes = ReadFile(dir.str() + "/users/demo/eval/pre.json");
    run.eval_post_bytes = ReadFile(dir.str() + "/users/demo/eval/post.json");
    run.prompts = backend->prompts();
    run.ok = true;
  } catch (const std::exception &e) {
    run.error = e.what();
  }
  return run;
}

Outcome Determinism(const FixtureRun &a, const FixtureRun &b) {
  Checker check;
  check.Expect(a.ok, "first run: " + a.error);
  check.Expect(b.ok, "second run: " + b.error);
  if (!a.ok || !b.ok) return check.Done("");
  check.Expect(a.outputs.graph_pre.dump(2) == b.outputs.graph_pre.dump(2), "graph export differs");
  check.Expect(a.outputs.graph_post.dump(2) == b.outputs.graph_post.dump(2), "post graph differs");
  check.Expect(a.eval_pre_bytes == b.eval_pre_bytes, "pre evaluation report differs");
  check.Expect(a.eval_post_bytes == b.eval_post_bytes, "post evaluation report differs");
  for (const std::string &line : DiffExpectedOutputs(AssetPath("fixtures/replay/expected"), a.outputs)) {
    check.Expect(false, "shipped expectation: " + line);
  }
  check.Expect(a.seconds < 60 && b.seconds < 60, "runtime over 60 s");
  return check.Done("two replay runs byte-identical, " + Fmt(a.seconds, 2) + " s / " +
                    Fmt(b.seconds, 2) + " s");
}

int LayerIndex(const std::string &name) { return name[1] - '0'; }

Outcome StructuralInvariants(const FixtureRun &run) {
  Checker check;
  if (!run.ok) return {false, "fixture run failed: " + run.error};
  const Json &doc = run.outputs.graph_pre;
  LayeredGraph graph = GraphFromJson(doc);
  StructureAudit audit = AuditStructure(graph);
  check.Expect(audit.non_adjacent_edges == 0, "audit: non-adjacent edges");
  check.Expect(audit.acyclic, "audit: cycle");
  check.Expect(audit.untraceable_nodes == 0, "audit: untraceable nodes");
  check.Expect(audit.dimension_mismatches == 0, "audit: dimension mismatches");

  // Independent walk over the export document.
  std::map<std::string, Json> nodes;
  std::map<std::string, std::string> dim_layer;
  for (const Json &n : doc.at("nodes")) nodes[n.at("id")] = n;
  for (const Json &d : doc.at("dimensions")) dim_layer[d.at("id")] = d.at("layer");
  std::array<int, 5> counts{};
  std::function<bool(const std::string &, int)> reaches_l0 = [&](const std::string &id, int depth) {
    if (depth > 5 || !nodes.count(id)) return false;
    const Json &n = nodes[id];
    if (n.at("layer") == "L0") return true;
    const char *key = n.at("layer") == "L1" ? "source_instances" : "source_nodes";
    for (const Json &s : n.at(key)) {
      if (reaches_l0(s.get<std::string>(), depth + 1)) return true;
    }
    return false;
  };
  for (const auto &[id, n] : nodes) {
    std::string layer = n.at("layer");
    int li = LayerIndex(layer);
    ++counts[li];
    if (li == 0) continue;
    const char *key = li == 1 ? "source_instances" : "source_nodes";
    for (const Json &s : n.at(key)) {
      auto it = nodes.find(s.get<std::string>());
      check.Expect(it != nodes.end(), id + ": dangling source");
      if (it != nodes.end()) {
        check.Expect(LayerIndex(it->second.at("layer")) == li - 1, id + ": non-adjacent edge");
      }
    }
    check.Expect(reaches_l0(id, 0), id + ": no L0 evidence");
    if (li >= 2) {
      bool matches = n.contains("dimension_id") && dim_layer.count(n.at("dimension_id")) &&
                     dim_layer[n.at("dimension_id")] == layer;
      check.Expect(matches, id + ": dimension of another layer");
    }
  }
  check.Expect(counts[1] > counts[2] && counts[2] > counts[3] && counts[3] > counts[4],
               "layer sizes not strictly decreasing");
  return check.Done("L0..L4 = " + std::to_string(counts[0]) + "/" + std::to_string(counts[1]) +
                    "/" + std::to_string(counts[2]) + "/" + std::to_string(counts[3]) + "/" +
                    std::to_string(counts[4]));
}

// Floor shares, then one extra item per layer starting at L1.
std::array<int, 4> OracleAllocation(const std::array<size_t, 4> &sizes, int n) {
  size_t total = sizes[0] + sizes[1] + sizes[2] + sizes[3];
  std::array<int, 4> out{};
  int left = n;
  for (size_t i = 0; i < 4; ++i) {
    out[i] = static_cast<int>(std::floor(static_cast<double>(n) * sizes[i] / total));
    left -= out[i];
  }
  for (size_t i = 0; left > 0; i = (i + 1) % 4) {
    if (static_cast<size_t>(out[i]) < sizes[i]) {
      ++out[i];
      --left;
    }
  }
  return out;
}

Outcome HitlInvariants(const FixtureRun &run) {
  Checker check;
  if (!run.ok) return {false, "fixture run failed: " + run.error};
  std::map<std::string, Json> before, after;
  for (const Json &n : run.outputs.graph_pre.at("nodes")) before[n.at("id")] = n;
  for (const Json &n : run.outputs.graph_post.at("nodes")) after[n.at("id")] = n;
  check.Expect(before.size() == after.size(), "node set changed");
  int changed = 0;
  for (const auto &[id, pre] : before) {
    auto it = after.find(id);
    if (it == after.end()) {
      check.Expect(false, id + " disappeared");
      continue;
    }
    Json a = pre, b = it->second;
    if (a != b) ++changed;
    for (const char *mutable_key : {"content", "revisions"}) {
      a.erase(mutable_key);
      b.erase(mutable_key);
    }
    check.Expect(a.dump() == b.dump(), id + ": field other than content/revisions changed");
  }
  check.Expect(run.outputs.graph_pre.at("dimensions") == run.outputs.graph_post.at("dimensions"),
               "dimensions changed");
  check.Expect(changed > 0, "no node was refined");

  std::array<size_t, 4> sizes{};
  for (const auto &[id, n] : before) {
    int li = LayerIndex(n.at("layer"));
    if (li >= 1) ++sizes[li - 1];
  }
  std::array<int, 4> got = AllocateItems(sizes, 18);
  check.Expect(got == OracleAllocation(sizes, 18), "allocation over fixture sizes");
  std::array<int, 4> asked{};
  for (const Json &item : run.outputs.hitl_report.at("items")) {
    ++asked[LayerIndex(item.at("layer")) - 1];
  }
  check.Expect(asked == got, "session items per layer differ from allocation");
  check.Expect(AllocateItems({73, 37, 28, 18}, 18) == std::array<int, 4>{9, 4, 3, 2},
               "73/37/28/18 allocation");
  return check.Done(std::to_string(changed) + " nodes refined; 18 items as " +
                    std::to_string(got[0]) + "/" + std::to_string(got[1]) + "/" +
                    std::to_string(got[2]) + "/" + std::to_string(got[3]));
}

Outcome AbstractionTrend(const FixtureRun &run) {
  Checker check;
  if (!run.ok) return {false, "fixture run failed: " + run.error};
  const Json &report = run.outputs.eval_pre;
  double j1 = report.at("jaccard_by_layer").at("L1"), j4 = report.at("jaccard_by_layer").at("L4");
  std::map<std::string, double> coherence;
  for (const Json &s : report.at("semantics")) {
    if (s.at("coherence").is_number()) coherence[s.at("layer")] = s.at("coherence");
  }
  check.Expect(coherence.count("L1") && coherence.count("L4"), "coherence undefined");
  check.Expect(j1 > j4, "jaccard(L1) <= jaccard(L4)");
  check.Expect(coherence["L4"] > coherence["L1"], "coherence(L4) <= coherence(L1)");
  return check.Done("jaccard " + Fmt(j1, 3) + " > " + Fmt(j4, 3) + ", coherence " +
                    Fmt(coherence["L4"], 3) + " > " + Fmt(coherence["L1"], 3));
}

std::string Sha256OfFile(const std::string &path) {
  std::string data = ReadFile(path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char *kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

Outcome PromptFidelity(const FixtureRun &run) {
  Checker check;
  const std::map<std::string, std::string> anchors = {
      {"E0", "5W1H framework"},
      {"IO", "SOURCE INSTANCE IDs (from the cluster)"},
      {"GD", "SAMPLE LAYER"},
      {"CD", "pattern recognition engine"},
      {"ID", "CLUSTER PATTERNS (INPUT)"},
      {"NR", "EXISTING BEHAVIORAL PATTERN"},
      {"QA", "USER'S JOURNAL ENTRIES"},
      {"CA", "Source Material Only"},
      {"PE", "atomic information points"},
      {"LS", "Semantic Retrieval Engine"},
  };
  std::string dir = PTM_DEFAULT_PROMPT_DIR;
  Json manifest = ParseJsonOrDie(ReadFile(dir + "/manifest.json"), "prompt manifest");
  std::set<std::string> listed;
  for (const Json &t : manifest.at("templates")) {
    std::string id = t.at("id"), file = t.at("file");
    listed.insert(id);
    check.Expect(Sha256OfFile(dir + "/" + file) == t.at("sha256"), id + ": hash mismatch");
  }
  check.Expect(listed.size() == anchors.size(), "manifest lists " + std::to_string(listed.size()));

  PromptLibrary library = PromptLibrary::Load(dir);
  for (const auto &[id, anchor] : anchors) {
    const PromptTemplate &t = library.Get(id);
    PromptVariables vars;
    for (const auto &p : t.placeholders) vars[p] = "<" + p + ">";
    std::string rendered = library.Render(id, vars);
    check.Expect(rendered.find(anchor) != std::string::npos, id + ": anchor missing");
    for (const auto &[other, other_anchor] : anchors) {
      if (other != id && rendered.find(other_anchor) != std::string::npos) {
        check.Expect(false, id + " also contains the " + other + " anchor");
      }
    }
  }

  std::map<std::string, int> seen;
  if (run.ok) {
    for (const std::string &prompt : run.prompts) {
      int hits = 0;
      for (const auto &[id, anchor] : anchors) {
        if (prompt.find(anchor) != std::string::npos) {
          ++hits;
          ++seen[id];
        }
      }
      check.Expect(hits == 1, "run prompt with " + std::to_string(hits) + " anchors");
    }
    for (const auto &[id, anchor] : anchors) check.Expect(seen[id] > 0, id + " never rendered");
  } else {
    check.Expect(false, "fixture run failed: " + run.error);
  }
  return check.Done(std::to_string(run.prompts.size()) + " run prompts, " +
                    std::to_string(anchors.size()) + " templates, manifest hashes match");
}

}  // namespace
}  // namespace ptm

int main() {
  using ptm::Outcome;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  ptm::FixtureRun first, second;
  bool replayed = false;
  auto replay = [&] {
    if (replayed) return;
    replayed = true;
    first = ptm::ReplayOnce();
    second = ptm::ReplayOnce();
  };
  criteria = {
      {"consensus oracle equivalence", ptm::ConsensusOracle},
      {"consensus bounds and symmetry", ptm::ConsensusBounds},
      {"worked pairs", ptm::WorkedPairs},
      {"score arithmetic rows", ptm::ScoreArithmeticRows},
      {"metric properties", ptm::MetricProperties},
      {"pipeline determinism", [&] { replay(); return ptm::Determinism(first, second); }},
      {"structural invariants", [&] { replay(); return ptm::StructuralInvariants(first); }},
      {"hitl invariants", [&] { replay(); return ptm::HitlInvariants(first); }},
      {"abstraction trend", [&] { replay(); return ptm::AbstractionTrend(first); }},
      {"prompt fidelity", [&] { replay(); return ptm::PromptFidelity(first); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
