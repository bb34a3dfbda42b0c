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

#include <gtest/gtest.h>

#include <cmath>

#include "ptm/base/error.h"
#include "ptm/eval/harness.h"
#include "ptm/eval/likert.h"
#include "ptm/eval/report.h"
#include "ptm/eval/scores.h"
#include "ptm/eval/semantics.h"
#include "ptm/eval/stats.h"
#include "ptm/eval/vocabulary.h"
#include "support/fake_llm.h"
#include "support/fixtures.h"

namespace ptm {
namespace {

using testing::FastOptions;
using testing::FunctionBackend;
using testing::QueueBackend;

double Round2(double x) { return std::round(x * 10000) / 100; }

TEST(ScoresTest, KnownCountRows) {
  Prf before = ComputePrf({3628, 1376, 1098});
  EXPECT_DOUBLE_EQ(Round2(before.precision), 72.50);
  EXPECT_DOUBLE_EQ(Round2(before.recall), 76.77);
  EXPECT_DOUBLE_EQ(Round2(before.f1), 74.57);
  EXPECT_DOUBLE_EQ(Round2(ComputePrf({3638, 1299, 1065}).f1), 75.48);
}

TEST(ScoresTest, DegenerateCases) {
  Prf perfect = ComputePrf({4, 0, 0});
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  Prf nothing = ComputePrf({0, 0, 0});
  EXPECT_EQ(nothing.f1, 0.0);
  Prf refusal = ComputePrf({0, 0, 5});
  EXPECT_EQ(refusal.recall, 0.0);
  Prf mixed = ComputePrf({3, 1, 1});
  EXPECT_DOUBLE_EQ(mixed.precision, 0.75);
  EXPECT_DOUBLE_EQ(mixed.recall, 0.75);
  EXPECT_DOUBLE_EQ(mixed.f1, 0.75);
}

TEST(ScoresTest, HarmonicMeanBounds) {
  for (long tp = 0; tp < 8; ++tp)
    for (long fp = 0; fp < 8; ++fp)
      for (long fn = 0; fn < 8; ++fn) {
        Prf p = ComputePrf({tp, fp, fn});
        if (p.precision + p.recall == 0) continue;
        EXPECT_LE(std::min(p.precision, p.recall), p.f1 + 1e-12);
        EXPECT_GE(std::max(p.precision, p.recall), p.f1 - 1e-12);
      }
}

TEST(ScoresTest, MicroSumsCountsAndKeepsMemberSd) {
  ScoreSummary s = Summarize({{1, 0, 1}, {2, 2, 0}, {0, 1, 1}}, {{1, 0, 1}, {2, 3, 1}});
  EXPECT_EQ(s.counts.tp, 3);
  EXPECT_EQ(s.counts.fp, 3);
  EXPECT_EQ(s.counts.fn, 2);
  EXPECT_DOUBLE_EQ(s.micro->precision, 0.5);
  ASSERT_EQ(s.member_f1.size(), 2u);
  ASSERT_TRUE(s.sd.has_value());
  EXPECT_FALSE(Summarize({}, {}).micro.has_value());
}

// Student t CDF by Simpson integration of the density; independent of the
// library used in production.
double StudentTwoSidedP(double t, double df) {
  auto pdf = [df](double x) {
    return std::tgamma((df + 1) / 2) / (std::sqrt(df * M_PI) * std::tgamma(df / 2)) *
           std::pow(1 + x * x / df, -(df + 1) / 2);
  };
  const int steps = 200000;
  double a = 0, b = std::fabs(t), h = (b - a) / steps, s = pdf(a) + pdf(b);
  for (int i = 1; i < steps; ++i) s += pdf(a + i * h) * (i % 2 ? 4 : 2);
  double half = s * h / 3;
  return 1 - 2 * half;
}

TEST(StatsTest, PairedTHandComputed) {
  std::vector<double> pre = {1, 2, 3, 4, 5}, post = {2, 4, 5, 4, 7};
  // d = {1,2,2,0,2}: mean 1.4, sample sd sqrt(0.8), t = 1.4 / (sqrt(0.8)/sqrt(5)) = 3.5.
  TestResult r = PairedT(pre, post);
  ASSERT_TRUE(r.statistic);
  EXPECT_NEAR(*r.statistic, 3.5, 1e-9);
  EXPECT_EQ(r.df, 4);
  EXPECT_NEAR(*r.p, StudentTwoSidedP(3.5, 4), 1e-6);
}

TEST(StatsTest, PairedTDegenerate) {
  TestResult same = PairedT({1, 2, 3}, {1, 2, 3});
  EXPECT_EQ(*same.statistic, 0.0);
  EXPECT_EQ(*same.p, 1.0);
  TestResult shift = PairedT({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6});
  EXPECT_TRUE(std::isinf(*shift.statistic));
  EXPECT_GT(*shift.statistic, 0);
  EXPECT_FALSE(PairedT({1}, {2}).statistic);
  EXPECT_EQ(TestResultToJson(shift, "t")["t"], "inf");
}

TEST(StatsTest, PearsonExamples) {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> lin, anti;
  for (double v : x) {
    lin.push_back(2 * v + 1);
    anti.push_back(-v);
  }
  EXPECT_NEAR(*PearsonR(x, lin).statistic, 1.0, 1e-12);
  EXPECT_NEAR(*PearsonR(x, anti).statistic, -1.0, 1e-12);
  // sxy = 8, sxx = syy = 10.
  TestResult r = PearsonR(x, {2, 1, 4, 3, 5});
  EXPECT_NEAR(*r.statistic, 0.8, 1e-12);
  double t = 0.8 * std::sqrt(3 / (1 - 0.64));
  EXPECT_NEAR(*r.p, StudentTwoSidedP(t, 3), 1e-6);
  EXPECT_FALSE(PearsonR(x, {1, 1, 1, 1, 1}).statistic);
  EXPECT_FALSE(PearsonR({1, 2}, {1, 2}).statistic);
}

TEST(JaccardTest, SetArithmetic) {
  EXPECT_DOUBLE_EQ(Jaccard({"a", "b", "c"}, {"b", "c", "d"}), 0.5);
  EXPECT_DOUBLE_EQ(Jaccard({"x", "y"}, {"x", "y"}), 1.0);
  EXPECT_DOUBLE_EQ(Jaccard({"x"}, {"y"}), 0.0);
  EXPECT_DOUBLE_EQ(Jaccard({}, {}), 0.0);
  EXPECT_DOUBLE_EQ(Jaccard({"p", "q"}, {"q"}), Jaccard({"q"}, {"p", "q"}));
}

TEST(JaccardTest, TokenizerDropsStopwordsAndPunctuation) {
  auto v = Vocabulary("The user studied Java, at NIGHT; and I didn't sleep.");
  EXPECT_EQ(v, (std::set<std::string>{"user", "studied", "java", "night", "didnt", "sleep"}));
  EXPECT_EQ(kStopwordListVersion, "en-stop-v1");
}

TEST(SilhouetteTest, OneDimensionalFixture) {
  std::vector<double> pts = {0, 1, 10, 11};
  std::vector<double> d(16);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) d[i * 4 + j] = std::fabs(pts[i] - pts[j]);
  double want = ((9.5 / 10.5) + (8.5 / 9.5)) / 2;
  EXPECT_NEAR(*Silhouette(d, 4, {0, 0, 1, 1}), want, 1e-12);
  EXPECT_FALSE(Silhouette(d, 4, {0, 0, 0, 0}));
  double mixed = *Silhouette(d, 4, {0, 1, 0, 1});
  EXPECT_GE(mixed, -1.0);
  EXPECT_LE(mixed, 1.0);
}

TEST(CoherenceTest, AlwaysCooccurringTermsScoreOne) {
  std::vector<std::string> docs = {"alpha beta gamma", "alpha beta gamma", "delta"};
  EXPECT_NEAR(CvCoherence({"alpha", "beta", "gamma"}, docs), 1.0, 1e-9);
}

TEST(LayerSemanticsTest, IdenticalTopicsSeparatePerfectly) {
  HashingEmbedder e;
  std::vector<std::string> texts = {
      "The user values steady routines and protected rest.",
      "The user values steady routines and protected rest.",
      "The user values steady routines and protected rest.",
      "Competitive badminton drives weekly social contact.",
      "Competitive badminton drives weekly social contact.",
      "Competitive badminton drives weekly social contact."};
  LayerSemantics s = MeasureLayer(Layer::kL4, texts, e);
  ASSERT_TRUE(s.defined);
  EXPECT_EQ(s.topic_count, 2);
  EXPECT_NEAR(*s.silhouette, 1.0, 1e-9);
  EXPECT_NEAR(s.within_topic_similarity, 1.0, 1e-9);

  std::vector<std::string> unrelated = {
      "Bought groceries downtown after lunch.", "Quantum homework took hours tonight.",
      "Called grandmother about the weekend trip.", "Fixed a flat bicycle tire outside.",
      "Watched a documentary on volcanoes.", "Cleaned the kitchen before guests arrived."};
  LayerSemantics r = MeasureLayer(Layer::kL1, unrelated, e);
  EXPECT_LT(r.coherence, s.coherence);
  EXPECT_FALSE(MeasureLayer(Layer::kL1, {"a", "b"}, e).defined);
}

TEST(LikertTest, SummaryAndNormalization) {
  LikertSummary s = SummarizeRatings({4, 5, 4});
  EXPECT_NEAR(s.mean, 13.0 / 3, 1e-12);
  EXPECT_NEAR(Round2(NormalizeLikert(4.2624) / 100), 81.56, 1e-9);
  EXPECT_NEAR(Round2(NormalizeLikert(4.2968) / 100), 82.42, 1e-9);
  EXPECT_DOUBLE_EQ(NormalizeLikert(1), 0.0);
  EXPECT_DOUBLE_EQ(NormalizeLikert(5), 100.0);
}

TEST(LikertTest, StoreRejectsOutOfRange) {
  testing::ScratchDir dir;
  LikertStore store(dir.str());
  EXPECT_THROW(store.Record({"u1", "1.5", Layer::kL1, ReviewPhase::kPreHitl, 6}), Error);
  EXPECT_THROW(store.Record({"u1", "1.5", Layer::kL1, ReviewPhase::kPreHitl, 0}), Error);
  store.Record({"u1", "1.5", Layer::kL1, ReviewPhase::kPreHitl, 4});
  store.Record({"u1", "2.1", Layer::kL2, ReviewPhase::kPostHitl, 5});
  auto back = store.Load("u1");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].phase, ReviewPhase::kPostHitl);
  Json summary = SummarizeLikert(back);
  EXPECT_EQ(summary["pre_hitl"]["L1"]["n"], 1);
  EXPECT_EQ(summary["post_hitl"]["all"]["mean"], 5.0);
}

TEST(SelectLabelsTest, RepairRule) {
  LabelSelection r = RepairLabelSelection(Json::parse("[10,10,4]"), 20, 3);
  EXPECT_EQ(r.ids, (std::vector<int>{10, 4, 0}));
  EXPECT_EQ(r.repairs.size(), 2u);
  LabelSelection trunc = RepairLabelSelection(Json::parse("[3,1,2,0,99,\"x\"]"), 4, 2);
  EXPECT_EQ(trunc.ids, (std::vector<int>{3, 1}));
  LabelSelection clean = RepairLabelSelection(Json::parse("[1,0]"), 4, 2);
  EXPECT_TRUE(clean.repairs.empty());
}

TEST(SelectLabelsTest, ContractAndGuard) {
  std::vector<std::string> labels;
  for (int i = 0; i < 80; ++i) labels.push_back("label " + std::to_string(i));
  auto backend = QueueBackend({"[79, 3, 3, 12]"});
  LlmClient client(PromptLibrary::Default(), backend, FastOptions());
  LabelSelection sel = SelectLabels(client, "Q?", labels, 5);
  ASSERT_EQ(sel.ids.size(), 5u);
  std::set<int> uniq(sel.ids.begin(), sel.ids.end());
  EXPECT_EQ(uniq.size(), 5u);
  for (int id : sel.ids) {
    EXPECT_GE(id, 0);
    EXPECT_LE(id, 79);
  }
  EXPECT_NE(backend->prompts()[0].find("exactly 5 unique numeric IDs"), std::string::npos);
  EXPECT_THROW(SelectLabels(client, "Q?", {"a", "b"}, 3), Error);
}

std::shared_ptr<FunctionBackend> AnsweringBackend(const std::string &answer) {
  return std::make_shared<FunctionBackend>([answer](const std::string &prompt) -> std::string {
    if (prompt.find("unique numeric IDs") != std::string::npos) return "[4, 0]";
    if (prompt.find("Source Material Only") != std::string::npos) return answer;
    if (prompt.find("atomic information points") != std::string::npos) {
      return R"({"true_positives":[{"gt_atomic_point":"a","p_atomic_point":"a","score":1.0}],
                 "false_negatives":[{"gt_atomic_point":"b","explanation":"missing"}],
                 "false_positives":[]})";
    }
    return "?";
  });
}

TEST(AnswerFromPtmTest, ContextIsSelectedNodesOnly) {
  LayeredGraph g = testing::LoadSampleGraph();
  auto backend = AnsweringBackend("The user studies at night.");
  LlmClient client(PromptLibrary::Default(), backend, FastOptions());
  PtmAnswer a = AnswerFromPtm(client, g, "When does the user study?", 2);
  EXPECT_EQ(a.answer, "The user studies at night.");
  // Label 4 is the fifth L1 node in natural order.
  EXPECT_EQ(a.context_node_ids, (std::vector<std::string>{"1.5", "1.1"}));
  std::string ca = backend->prompts()[1];
  EXPECT_NE(ca.find(g.node("1.5").content), std::string::npos);
  EXPECT_EQ(ca.find(g.node("2.1").content), std::string::npos);
  EXPECT_NE(ca.find("User Query:\nWhen does the user study?"), std::string::npos);
}

TEST(AnswerFromPtmTest, RefusalPassesThrough) {
  LayeredGraph g = testing::LoadSampleGraph();
  LlmClient client(PromptLibrary::Default(),
                   AnsweringBackend("I cannot answer this based on the provided context."),
                   FastOptions());
  EXPECT_EQ(AnswerFromPtm(client, g, "What is their favourite colour?", 5).answer,
            "I cannot answer this based on the provided context.");
  EXPECT_THROW(AnswerFromPtm(client, LayeredGraph("u"), "q", 5), Error);
}

TEST(AtomicMatchTest, CountsFollowLists) {
  LlmClient client(PromptLibrary::Default(), AnsweringBackend(""), FastOptions());
  AtomicMatchReport r = AtomicMatch(client, "q", "a", "a and b");
  EXPECT_EQ(r.counts.tp, 1);
  EXPECT_EQ(r.counts.fn, 1);
  EXPECT_EQ(r.counts.fp, 0);
  EXPECT_THROW(AtomicMatch(client, "q", "", "gt"), Error);
}

std::vector<JournalEntry> Entries() {
  std::vector<JournalEntry> out;
  const char *dates[] = {"2025-03-03", "2025-03-04", "2025-03-06", "2025-03-07", "2025-03-20"};
  for (int i = 0; i < 5; ++i) {
    out.push_back(JournalEntry{"j" + std::to_string(i), "u1", Date::ParseOrDie(dates[i]),
                               "Entry number " + std::to_string(i), 3});
  }
  return out;
}

TEST(TestsetTest, WindowItemsWithRoundRobinHints) {
  auto backend = QueueBackend({R"([{"query":"q1","ground_truth":"g1"},{"query":"q2","ground_truth":"g2"},
      {"query":"","ground_truth":"x"},{"query":"q3","ground_truth":"g3"},{"query":"q4","ground_truth":"g4"},
      {"query":"q5","ground_truth":"g5"}])"});
  LlmClient client(PromptLibrary::Default(), backend, FastOptions());
  auto items = GenerateTestsetWindow(client, Entries(), Date::ParseOrDie("2025-03-03"),
                                     Date::ParseOrDie("2025-03-07"), "w1");
  ASSERT_EQ(items.size(), 5u);
  EXPECT_EQ(items[0].id, "w1-1");
  EXPECT_EQ(*items[0].target_layer_hint, Layer::kL1);
  EXPECT_EQ(*items[3].target_layer_hint, Layer::kL4);
  EXPECT_EQ(*items[4].target_layer_hint, Layer::kL1);
  std::string prompt = backend->prompts()[0];
  EXPECT_NE(prompt.find("[2025-03-07] Entry number 3"), std::string::npos);
  EXPECT_EQ(prompt.find("Entry number 4"), std::string::npos);
  EXPECT_EQ(QaItemFromJson(QaItemToJson(items[2])).query, items[2].query);

  EXPECT_THROW(GenerateTestsetWindow(client, Entries(), Date::ParseOrDie("2025-04-01"),
                                     Date::ParseOrDie("2025-04-05"), "w"),
               Error);
}

TEST(ReportTest, AssemblesSectionsAndCsv) {
  LayeredGraph g = testing::LoadSampleGraph();
  LlmClient client(PromptLibrary::Default(), AnsweringBackend("The user studies at night."),
                   FastOptions());
  auto items = GenerateTestsetWindow(
      *std::make_unique<LlmClient>(PromptLibrary::Default(),
                                   QueueBackend({R"([{"query":"q","ground_truth":"g"}])"}), FastOptions()),
      Entries(), Date::ParseOrDie("2025-03-03"), Date::ParseOrDie("2025-03-07"), "w1");
  UserEvaluationInput u;
  u.user_id = "sample-user";
  u.graph = g;
  u.journals = Entries();
  u.items = EvaluateItems(client, g, items, 2);
  HashingEmbedder e;
  Json pre = BuildEvaluationReport("pre", {u}, e);
  EXPECT_EQ(pre["overall"]["tp"], 1);
  EXPECT_EQ(pre["overall"]["fn"], 1);
  EXPECT_EQ(pre["by_layer"]["L1"]["n"], 1);
  EXPECT_EQ(pre["semantics"].size(), 4u);
  EXPECT_TRUE(pre["t_tests"]["f1_pre_vs_post"].is_null());
  Json post = BuildEvaluationReport("post", {u}, e, pre);
  EXPECT_EQ(post["t_tests"]["f1_pre_vs_post"]["n"], 1);
  std::string csv = EvaluationCsv(post);
  EXPECT_NE(csv.find("# overall\ncondition,tp,fp,fn,precision,recall,f1,sd,n\npost,1,0,1,1.0000,0.5000,0.6667,,1\n"),
            std::string::npos)
      << csv;
  EXPECT_NE(csv.find("# jaccard"), std::string::npos);
}

}  // namespace
}  // namespace ptm
