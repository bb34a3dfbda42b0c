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

#ifndef PTM_BASE_RANDOM_H_
#define PTM_BASE_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ptm {

// Seeded generator whose output is identical on every standard library:
// mt19937_64 is fully specified, and bounded draws avoid the
// implementation-defined std::uniform_int_distribution.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound) by rejection sampling. bound must be > 0.
  uint64_t Below(uint64_t bound) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <typename T>
  void Shuffle(std::vector<T> &v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<size_t>(Below(i))]);
    }
  }

  // k distinct indices from [0, n) without replacement, in draw order.
  std::vector<size_t> Sample(size_t n, size_t k) {
    std::vector<size_t> pool(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + static_cast<size_t>(Below(n - i))]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ptm

#endif  // PTM_BASE_RANDOM_H_
