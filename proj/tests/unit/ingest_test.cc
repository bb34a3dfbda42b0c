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

#include "ptm/base/error.h"
#include "ptm/base/hash.h"
#include "ptm/ingest/extractor.h"
#include "ptm/ingest/journal.h"
#include "support/fake_llm.h"
#include "support/fixtures.h"

namespace ptm {
namespace {

using testing::FastOptions;
using testing::QueueBackend;

const char kThreeEntries[] =
    R"({"id":"e3","user_id":"u1","date":"2025-03-06","text":"Thursday report."})"
    "\n"
    R"({"id":"e1","user_id":"u1","date":"2025-03-03","text":"Monday night homework."})"
    "\n"
    R"({"id":"e2","user_id":"u1","date":"2025-03-05","text":"Wednesday Java practice."})"
    "\n";

TEST(IngestTest, SortsByDate) {
  IngestResult r = MergeJournalLines({}, "u1", kThreeEntries);
  ASSERT_EQ(r.corpus.size(), 3u);
  EXPECT_EQ(r.corpus[0].id, "e1");
  EXPECT_EQ(r.corpus[1].id, "e2");
  EXPECT_EQ(r.corpus[2].id, "e3");
  EXPECT_EQ(r.corpus[0].word_count, 3);
  EXPECT_TRUE(r.rejected.empty());
}

TEST(IngestTest, DuplicateIdRejected) {
  std::string batch = std::string(kThreeEntries) +
                      R"({"id":"e2","user_id":"u1","date":"2025-03-09","text":"again"})";
  IngestResult r = MergeJournalLines({}, "u1", batch);
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].id, "e2");
  EXPECT_EQ(r.rejected[0].reason, "duplicate");
  EXPECT_EQ(r.rejected[0].line, 4);
  EXPECT_EQ(r.corpus.size(), 3u);
}

TEST(IngestTest, BadEntriesRejectedOthersAccepted) {
  std::string batch =
      R"({"id":"a","date":"2025-03-03","text":"   "})"
      "\n"
      R"({"id":"b","date":"2025-02-30","text":"bad date"})"
      "\n"
      "not json\n"
      R"({"id":"c","date":"2025-03-04","text":"fine"})"
      "\n"
      R"({"id":"d","user_id":"u2","date":"2025-03-04","text":"other user"})";
  IngestResult r = MergeJournalLines({}, "u1", batch);
  ASSERT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.corpus[0].id, "c");
  ASSERT_EQ(r.rejected.size(), 4u);
  EXPECT_EQ(r.rejected[0].reason, "empty text");
  EXPECT_EQ(r.rejected[1].reason, "malformed date");
  EXPECT_EQ(r.rejected[2].reason, "malformed JSON");
  EXPECT_EQ(r.rejected[3].reason, "user_id mismatch");
}

TEST(IngestTest, StorePersistsAndDedupsAcrossBatches) {
  testing::ScratchDir dir;
  JournalStore store(dir.str());
  store.Ingest("u1", kThreeEntries);
  IngestResult again = store.Ingest("u1", kThreeEntries);
  EXPECT_EQ(again.rejected.size(), 3u);
  EXPECT_EQ(store.Load("u1").size(), 3u);
}

JournalEntry Entry() {
  return JournalEntry{"j1", "u1", Date::ParseOrDie("2025-03-03"),
                      "On Monday night I caught up with my assignments at home.", 11};
}

TEST(ExtractTest, MapsFiveWOneHFields) {
  auto backend = QueueBackend({R"({"informations":[{
      "WHAT":"User worked on catching up with several unfinished assignments.",
      "WHEN":"Monday, 20:00-22:00","WHERE":"Home","WHO":"",
      "WHY":"To clear the backlog of pending tasks before the next day's lecture session.",
      "HOW":""}]})"});
  LlmClient client(PromptLibrary::Default(), backend, FastOptions());
  ExtractionOutcome out = ExtractL0(client, Entry());
  ASSERT_FALSE(out.failed);
  ASSERT_EQ(out.instances.size(), 1u);
  const auto &x = out.instances[0];
  EXPECT_EQ(x.id, "j1-1");
  EXPECT_EQ(x.what, "User worked on catching up with several unfinished assignments.");
  ASSERT_TRUE(x.time_window.has_value());
  EXPECT_EQ(x.time_window->ToString(), "20:00-22:00");
  EXPECT_EQ(x.weekday.value_or(""), "Monday");
  EXPECT_EQ(x.date.ToString(), "2025-03-03");
  EXPECT_EQ(x.journal_entry_id, "j1");
  EXPECT_TRUE(x.who.empty());
  EXPECT_NE(backend->prompts()[0].find("Input text:\n" + Entry().text), std::string::npos);
}

TEST(ExtractTest, EmptyInformations) {
  LlmClient client(PromptLibrary::Default(), QueueBackend({R"({"informations": []})"}),
                   FastOptions());
  ExtractionOutcome out = ExtractL0(client, Entry());
  EXPECT_FALSE(out.failed);
  EXPECT_TRUE(out.instances.empty());
}

TEST(ExtractTest, ParsesWhenFormat) {
  WhenParse w = ParseWhen("Friday, 10:00-12:30");
  EXPECT_EQ(w.weekday.value_or(""), "Friday");
  ASSERT_TRUE(w.window);
  EXPECT_EQ(w.window->start_minutes, 600);
  EXPECT_EQ(w.window->end_minutes, 750);

  WhenParse annotated_style = ParseWhen("Monday (night, 20:00--22:00, 2h)");
  ASSERT_TRUE(annotated_style.window);
  EXPECT_EQ(annotated_style.window->ToString(), "20:00-22:00");

  WhenParse start_only = ParseWhen("Saturday, 09:30 for 2 hours");
  ASSERT_TRUE(start_only.window);
  EXPECT_EQ(start_only.window->ToString(), "09:30-11:30");

  WhenParse raw = ParseWhen("sometime last week");
  EXPECT_FALSE(raw.window);
  EXPECT_FALSE(raw.weekday);
}

TEST(ExtractTest, UnparseableWhenKeepsRawText) {
  LlmClient client(PromptLibrary::Default(),
                   QueueBackend({R"({"informations":[{"WHAT":"User read","WHEN":"evening"}]})"}),
                   FastOptions());
  auto out = ExtractL0(client, Entry());
  ASSERT_EQ(out.instances.size(), 1u);
  EXPECT_EQ(out.instances[0].when, "evening");
  EXPECT_FALSE(out.instances[0].time_window);
}

TEST(ExtractTest, ItemWithoutWhatDropped) {
  LlmClient client(PromptLibrary::Default(),
                   QueueBackend({R"({"informations":[{"WHAT":""},{"WHERE":"Home"},
                                     {"WHAT":"User cooked"},{"WHAT":"User slept"}]})"}),
                   FastOptions());
  auto out = ExtractL0(client, Entry());
  ASSERT_EQ(out.instances.size(), 2u);
  EXPECT_EQ(out.dropped.size(), 2u);
  EXPECT_EQ(out.instances[0].id, "j1-1");
  EXPECT_EQ(out.instances[1].id, "j1-2");
}

TEST(ExtractTest, OneCorrectiveReaskThenFailure) {
  auto backend = QueueBackend({"not json", R"({"informations":[{"WHAT":"User ran"}]})"});
  LlmClient client(PromptLibrary::Default(), backend, FastOptions());
  auto ok = ExtractL0(client, Entry());
  EXPECT_FALSE(ok.failed);
  EXPECT_EQ(ok.instances.size(), 1u);
  ASSERT_EQ(backend->prompts().size(), 2u);
  EXPECT_EQ(backend->prompts()[1], backend->prompts()[0] + LlmClient::CorrectiveSuffix());

  LlmClient bad(PromptLibrary::Default(), QueueBackend({"nope", "```json {}```"}), FastOptions());
  auto failed = ExtractL0(bad, Entry());
  EXPECT_TRUE(failed.failed);
  EXPECT_EQ(bad.call_count(), 2);
}

TEST(LlmClientTest, RetriesTransportErrorsOnly) {
  LlmClient client(PromptLibrary::Default(),
                   QueueBackend({"!unavailable", "!unavailable", R"({"informations":[]})"}),
                   FastOptions());
  EXPECT_FALSE(ExtractL0(client, Entry()).failed);
  EXPECT_EQ(client.call_count(), 3);

  LlmClientOptions opts = FastOptions();
  opts.max_retries = 1;
  LlmClient give_up(PromptLibrary::Default(),
                    QueueBackend({"!unavailable", "!unavailable", "{}"}), opts);
  EXPECT_THROW(ExtractL0(give_up, Entry()), Error);
}

TEST(LlmClientTest, RejectsTemperatureOutOfRange) {
  LlmClient client(PromptLibrary::Default(), QueueBackend({}), FastOptions());
  EXPECT_THROW(client.Send({"E0", {{"text", "x"}}, 2.5, ResponseShape::kText}), Error);
}

TEST(ReplayTest, RecordThenReplayIsIdenticalAndMissesFail) {
  testing::ScratchDir dir;
  auto live = QueueBackend({R"({"informations":[{"WHAT":"User swam","WHEN":"Friday, 10:00-12:30"}]})"});
  LlmClient recorder(PromptLibrary::Default(),
                     std::make_shared<RecordingBackend>(live, dir.str()), FastOptions());
  auto first = ExtractL0(recorder, Entry());

  LlmClient replay(PromptLibrary::Default(), std::make_shared<ReplayBackend>(dir.str()),
                   FastOptions());
  for (int i = 0; i < 2; ++i) {
    auto again = ExtractL0(replay, Entry());
    ASSERT_EQ(again.instances.size(), 1u);
    EXPECT_EQ(again.instances[0].id, first.instances[0].id);
    EXPECT_EQ(again.instances[0].what, first.instances[0].what);
  }
  JournalEntry other = Entry();
  other.text = "A different entry.";
  try {
    ExtractL0(replay, other);
    FAIL() << "replay must not fabricate";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
    EXPECT_NE(std::string(e.what()).find("fixture miss"), std::string::npos);
  }
}

}  // namespace
}  // namespace ptm
