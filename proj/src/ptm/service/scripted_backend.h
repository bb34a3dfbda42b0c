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

#ifndef PTM_SERVICE_SCRIPTED_BACKEND_H_
#define PTM_SERVICE_SCRIPTED_BACKEND_H_

#include <string>

#include "ptm/llm/llm_client.h"

namespace ptm {

// Offline stand-in for a live model. Recognises each template by its anchor
// phrase and answers with plain text heuristics, so the same prompt always
// gets the same reply. Used to record the shipped replay fixtures.
//
// Extraction expects the journal style of the shipped corpus:
//   "Today was Monday. From 07:00 to 08:00, I reviewed notes at the library
//    with Rina because the quiz is on Friday, using flashcards."
class ScriptedBackend : public LlmBackend {
 public:
  std::string Complete(const std::string &prompt, double temperature) override;
  std::string name() const override { return "scripted"; }
};

}  // namespace ptm

#endif  // PTM_SERVICE_SCRIPTED_BACKEND_H_
