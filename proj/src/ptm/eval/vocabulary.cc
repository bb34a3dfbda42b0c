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

#include "ptm/eval/vocabulary.h"

#include <algorithm>
#include <unordered_set>

#include "ptm/base/text.h"

namespace ptm {

namespace {

// en-stop-v1: function words, auxiliaries and pronouns. Do not edit in place;
// add a new list and bump the version instead.
const char *const kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "could", "did", "do", "does", "doing", "done", "down", "during", "each",
    "even", "few", "for", "from", "further", "get", "got", "had", "has", "have", "having", "he",
    "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "im", "in",
    "into", "is", "it", "its", "itself", "ive", "just", "like", "many", "me", "more", "most",
    "much", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once", "one", "only",
    "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should",
    "so", "some", "still", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "us", "very", "was", "we", "were", "what", "when", "where", "which",
    "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
    "yourselves"};

const std::unordered_set<std::string> &StopwordSet() {
  static const std::unordered_set<std::string> set(std::begin(kStopwords), std::end(kStopwords));
  return set;
}

}  // namespace

bool IsStopword(std::string_view lower_token) {
  return StopwordSet().count(std::string(lower_token)) > 0;
}

std::vector<std::string> ContentTokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto &t : WordTokens(text)) {
    if (!IsStopword(t)) out.push_back(std::move(t));
  }
  return out;
}

std::set<std::string> Vocabulary(std::string_view text) {
  auto tokens = ContentTokens(text);
  return std::set<std::string>(tokens.begin(), tokens.end());
}

std::set<std::string> Vocabulary(const std::vector<std::string> &texts) {
  std::set<std::string> out;
  for (const auto &t : texts) {
    for (auto &w : ContentTokens(t)) out.insert(std::move(w));
  }
  return out;
}

double Jaccard(const std::set<std::string> &a, const std::set<std::string> &b) {
  if (a.empty() && b.empty()) return 0.0;
  size_t inter = 0;
  for (const auto &w : a) inter += b.count(w);
  size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace ptm
