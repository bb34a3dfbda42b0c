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

#ifndef PTM_BASE_TEXT_H_
#define PTM_BASE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace ptm {

std::string ToLower(std::string_view s);
std::string Trim(std::string_view s);
bool StartsWith(std::string_view s, std::string_view prefix);

// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string> SplitWhitespace(std::string_view s);

// Number of whitespace-delimited tokens.
int WordCount(std::string_view s);

// Lowercased alphanumeric word tokens. Punctuation separates words, except
// that an apostrophe inside a word is dropped ("don't" -> "dont").
std::vector<std::string> WordTokens(std::string_view s);

// Splits text into sentences on runs of '.', '!' or '?'. Fragments are
// trimmed; empty fragments are dropped.
std::vector<std::string> SplitSentences(std::string_view s);

std::string Join(const std::vector<std::string> &parts, std::string_view sep);

// Returns the text between `begin_marker` and `end_marker` (or end of text
// when end_marker is empty or not found). Empty string when begin is absent.
std::string Between(std::string_view text, std::string_view begin_marker,
                    std::string_view end_marker);

}  // namespace ptm

#endif  // PTM_BASE_TEXT_H_
