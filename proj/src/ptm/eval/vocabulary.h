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

#ifndef PTM_EVAL_VOCABULARY_H_
#define PTM_EVAL_VOCABULARY_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ptm {

// Identifier of the stopword list below; reported with every overlap score
// because thresholds depend on it.
inline constexpr std::string_view kStopwordListVersion = "en-stop-v1";

bool IsStopword(std::string_view lower_token);

// Lowercased word tokens with punctuation stripped and stopwords removed,
// in text order (duplicates kept).
std::vector<std::string> ContentTokens(std::string_view text);
std::set<std::string> Vocabulary(std::string_view text);
std::set<std::string> Vocabulary(const std::vector<std::string> &texts);

// |A n B| / |A u B|, 0 when both are empty.
double Jaccard(const std::set<std::string> &a, const std::set<std::string> &b);

}  // namespace ptm

#endif  // PTM_EVAL_VOCABULARY_H_
