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

#ifndef PTM_CONSENSUS_REDUCER_H_
#define PTM_CONSENSUS_REDUCER_H_

#include <vector>

#include "ptm/consensus/embedding.h"

namespace ptm {

// Projects points onto their top `components` principal axes. Axis signs are
// fixed so that the largest-magnitude loading is positive, which makes the
// output independent of the eigensolver's sign choice. Returns the input
// unchanged when there are fewer points than components.
std::vector<Vector> PcaReduce(const std::vector<Vector> &points, int components);

}  // namespace ptm

#endif  // PTM_CONSENSUS_REDUCER_H_
