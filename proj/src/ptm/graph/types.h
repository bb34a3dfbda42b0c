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

#ifndef PTM_GRAPH_TYPES_H_
#define PTM_GRAPH_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptm/base/dates.h"

namespace ptm {

// Abstraction layers, totally ordered L0 < L1 < ... < L4.
enum class Layer : int { kL0 = 0, kL1 = 1, kL2 = 2, kL3 = 3, kL4 = 4 };

std::string_view LayerName(Layer layer);  // "L0" .. "L4"
Layer ParseLayer(std::string_view name);  // throws kInvalidArgument
inline int LayerIndex(Layer layer) { return static_cast<int>(layer); }
inline Layer LayerFromIndex(int i) { return static_cast<Layer>(i); }

enum class PhaseState { kIngested, kL1Built, kFullBuilt, kRefined };

std::string_view PhaseStateName(PhaseState state);
PhaseState ParsePhaseState(std::string_view name);

// One atomic 5W1H event extracted from a journal entry (layer L0).
struct BehavioralInstance {
  std::string id;
  std::string what;
  std::string when;
  std::string where;
  std::string who;  // may be empty
  std::string why;
  std::string how;
  Date date;
  std::optional<std::string> weekday;
  std::optional<TimeWindow> time_window;
  std::string journal_entry_id;
};

struct Revision {
  std::string timestamp;
  std::string prior_content;
  std::string feedback_id;
  std::string content;  // content after this revision
};

// A synthesized node at L1..L4. Edges are stored on the upper node as
// source_ids pointing one layer down.
struct PtmNode {
  std::string id;
  Layer layer = Layer::kL1;
  std::string title;
  std::string content;
  std::optional<std::string> dimension_id;
  std::vector<std::string> source_ids;
  std::vector<Revision> revisions;
};

// An analytical lens guiding clustering and synthesis of one higher layer.
struct AnalyticalDimension {
  std::string id;
  Layer layer = Layer::kL2;
  std::string title;
  std::string description;
};

}  // namespace ptm

#endif  // PTM_GRAPH_TYPES_H_
