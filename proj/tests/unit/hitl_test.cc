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

#include <set>

#include "ptm/base/error.h"
#include "ptm/hitl/hitl.h"
#include "support/fake_llm.h"
#include "support/fixtures.h"

namespace ptm {
namespace {

using testing::FastOptions;
using testing::FunctionBackend;
using testing::QueueBackend;

TEST(TUnitTest, HeuristicExamples) {
  EXPECT_EQ(CountTUnits("Rest feels earned."), 1);
  EXPECT_EQ(CountTUnits(""), 0);
  EXPECT_EQ(CountTUnits("I plan ahead, and I relax later."), 2);
  EXPECT_EQ(CountTUnits("Provides focus."), 1);
  EXPECT_EQ(CountTUnits("I study; then I sleep. It works!"), 3);
  // Coordination of verbs or objects is not a new clause.
  EXPECT_EQ(CountTUnits("I read books, and watch films."), 1);
  EXPECT_EQ(CountTUnits("   ...  "), 0);
}

TEST(AllocateItemsTest, ProportionalWithLowerLayerRemainder) {
  EXPECT_EQ(AllocateItems({73, 37, 28, 18}, 18), (std::array<int, 4>{9, 4, 3, 2}));
  EXPECT_EQ(AllocateItems({2, 2, 1, 1}, 18), (std::array<int, 4>{2, 2, 1, 1}));
  EXPECT_EQ(AllocateItems({1, 10, 0, 0}, 3), (std::array<int, 4>{1, 2, 0, 0}));
  auto a = AllocateItems({16, 9, 6, 3}, 18);
  EXPECT_EQ(a[0] + a[1] + a[2] + a[3], 18);
}

std::shared_ptr<FunctionBackend> QuestionBackend() {
  return std::make_shared<FunctionBackend>([](const std::string &prompt) -> std::string {
    if (prompt.find("creating a test dataset") != std::string::npos) {
      return R"([{"query":"What exactly do you do during that time?","ground_truth":"x"}])";
    }
    if (prompt.find("update and refine an existing") != std::string::npos) {
      return R"({"updated_content":"Refined content that reduces future anxiety."})";
    }
    return "?";
  });
}

TEST(OpenSessionTest, StratifiedShuffledAndSeeded) {
  LayeredGraph g = testing::LoadSampleGraph();  // 8 / 4 / 2 / 1 nodes
  LlmClient client(PromptLibrary::Default(), QuestionBackend(), FastOptions());
  HitlSession a = OpenSession(g, client, 6, 11);
  HitlSession b = OpenSession(g, client, 6, 11);
  ASSERT_EQ(a.items.size(), 6u);
  std::map<Layer, int> per_layer;
  std::set<std::string> nodes;
  for (size_t i = 0; i < a.items.size(); ++i) {
    per_layer[a.items[i].layer]++;
    nodes.insert(a.items[i].node_id);
    EXPECT_EQ(a.items[i].node_id, b.items[i].node_id);
    EXPECT_EQ(a.items[i].id, "q" + std::to_string(i + 1));
    EXPECT_EQ(a.items[i].question, "What exactly do you do during that time?");
  }
  EXPECT_EQ(nodes.size(), 6u);
  // 15 nodes, 6 items: floors 3/1/0/0, remainder to L1 then L2.
  EXPECT_EQ(per_layer[Layer::kL1], 4);
  EXPECT_EQ(per_layer[Layer::kL2], 2);
  EXPECT_EQ(a.graph_version_pre, g.version());
}

TEST(OpenSessionTest, SmallGraphQuestionsEveryNode) {
  LayeredGraph g = testing::LoadSampleGraph();
  LlmClient client(PromptLibrary::Default(), QuestionBackend(), FastOptions());
  HitlSession s = OpenSession(g, client, 18, 1);
  EXPECT_EQ(s.items.size(), 15u);
  EXPECT_EQ(s.warnings.size(), 1u);
}

TEST(OpenSessionTest, NeedsFullGraph) {
  LlmClient client(PromptLibrary::Default(), QuestionBackend(), FastOptions());
  EXPECT_THROW(OpenSession(LayeredGraph("u"), client, 18, 1), Error);
}

TEST(GenerateQuestionTest, FallbackOnEmptyGeneration) {
  LayeredGraph g = testing::LoadSampleGraph();
  LlmClient client(PromptLibrary::Default(), QueueBackend({"[]"}), FastOptions());
  bool fallback = false;
  std::string q = GenerateQuestion(client, g.node("1.5"), &fallback);
  EXPECT_TRUE(fallback);
  EXPECT_EQ(q, "Is it true that Consistent Nighttime Academic Productivity? Please explain.");

  LlmClient bad(PromptLibrary::Default(), QueueBackend({"nope", "still nope"}), FastOptions());
  EXPECT_NE(GenerateQuestion(bad, g.node("1.5")).find("Consistent Nighttime"), std::string::npos);
}

TEST(GenerateQuestionTest, ScopedToNodeContent) {
  LayeredGraph g = testing::LoadSampleGraph();
  auto backend = QueueBackend(
      {R"([{"query":"Is it true that you feel more satisfied after completing a task if it was very difficult?","ground_truth":"y"}])"});
  LlmClient client(PromptLibrary::Default(), backend, FastOptions());
  std::string q = GenerateQuestion(client, g.node("2.4"));
  EXPECT_NE(q.find("you feel more satisfied after"), std::string::npos);
  EXPECT_NE(backend->prompts()[0].find("USER'S JOURNAL ENTRIES:\n" + g.node("2.4").content),
            std::string::npos);
}

TEST(ApplyFeedbackTest, RewritesContentOnlyAndAppendsRevision) {
  LayeredGraph g = testing::LoadSampleGraph();
  const PtmNode before = g.node("2.1");
  LlmClient client(PromptLibrary::Default(), QuestionBackend(), FastOptions());
  FeedbackRecord fb = MakeFeedback("q3",
                                   "I plan my week ahead because it reduces future anxiety, and I "
                                   "feel calmer.",
                                   "2025-04-01T10:00:00Z");
  EXPECT_EQ(fb.word_count, 14);
  EXPECT_EQ(fb.t_unit_count, 2);
  LayeredGraph next = ApplyFeedback(g, client, "2.1", "Why do you plan?", fb);
  const PtmNode &after = next.node("2.1");
  EXPECT_EQ(next.version(), g.version() + 1);
  EXPECT_EQ(next.phase_state(), PhaseState::kRefined);
  EXPECT_EQ(after.content, "Refined content that reduces future anxiety.");
  ASSERT_EQ(after.revisions.size(), before.revisions.size() + 1);
  EXPECT_EQ(after.revisions.back().prior_content, before.content);
  EXPECT_EQ(after.revisions.back().feedback_id, "q3");
  EXPECT_EQ(after.id, before.id);
  EXPECT_EQ(after.layer, before.layer);
  EXPECT_EQ(after.source_ids, before.source_ids);
  EXPECT_EQ(after.dimension_id, before.dimension_id);
}

TEST(SubmitAnswerTest, ShortAnswerStillRefinesAndSkipIsNoop) {
  LayeredGraph g = testing::LoadSampleGraph();
  LlmClient client(PromptLibrary::Default(), QuestionBackend(), FastOptions());
  HitlSession s = OpenSession(g, client, 3, 5);
  std::string first = s.items[0].id, second = s.items[1].id;
  LayeredGraph next = SubmitAnswer(s, g, client, first, "Provides focus.", "t1");
  EXPECT_EQ(next.version(), g.version() + 1);
  EXPECT_EQ(s.items[0].status, ItemStatus::kAnswered);
  EXPECT_EQ(s.graph_version_post, next.version());
  EXPECT_EQ(s.feedback[0].word_count, 2);

  SkipItem(s, second);
  EXPECT_EQ(s.items[1].status, ItemStatus::kSkipped);
  EXPECT_EQ(s.NextPending()->id, s.items[2].id);
  EXPECT_THROW(SubmitAnswer(s, next, client, first, "again", "t2"), Error);
  EXPECT_THROW(SubmitAnswer(s, next, client, "nope", "x", "t2"), Error);
  EXPECT_THROW(SubmitAnswer(s, next, client, s.items[2].id, "  ", "t2"), Error);

  Json report = SessionReport(s);
  EXPECT_EQ(report["version_pre"], g.version());
  EXPECT_EQ(report["version_post"], next.version());
  EXPECT_EQ(report["feedback_stats"]["status"]["skipped"], 1);
}

TEST(SubmitAnswerTest, RefinementFailureLeavesNodeUnchanged) {
  LayeredGraph g = testing::LoadSampleGraph();
  auto backend = QueueBackend({R"([{"query":"Q?","ground_truth":"a"}])", "bad", "bad again"});
  LlmClient client(PromptLibrary::Default(), backend, testing::FastOptions());
  HitlSession s = OpenSession(g, client, 1, 5);
  LayeredGraph same = SubmitAnswer(s, g, client, s.items[0].id, "Long answer here.", "t");
  EXPECT_EQ(same.version(), g.version());
  EXPECT_EQ(s.items[0].status, ItemStatus::kFailed);
}

TEST(HitlStoreTest, RoundTrip) {
  testing::ScratchDir dir;
  LayeredGraph g = testing::LoadSampleGraph();
  LlmClient client(PromptLibrary::Default(), QuestionBackend(), FastOptions());
  HitlSession s = OpenSession(g, client, 4, 9);
  SubmitAnswer(s, g, client, s.items[0].id, "I plan ahead, and I relax later.", "t");
  HitlStore store(dir.str());
  EXPECT_FALSE(store.Has("sample-user"));
  store.Save(s);
  HitlSession back = store.Load("sample-user");
  EXPECT_EQ(SessionToJson(back), SessionToJson(s));
  EXPECT_EQ(back.feedback[0].t_unit_count, 2);
}

}  // namespace
}  // namespace ptm
