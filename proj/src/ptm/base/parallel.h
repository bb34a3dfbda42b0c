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

#ifndef PTM_BASE_PARALLEL_H_
#define PTM_BASE_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ptm {

// Runs fn(i) for i in [0, n) on at most `max_in_flight` threads. Results are
// written by index, so output order never depends on scheduling. The first
// exception (lowest index) is rethrown after all workers finish.
template <typename T>
std::vector<T> BoundedParallelMap(size_t n, int max_in_flight,
                                  const std::function<T(size_t)> &fn) {
  std::vector<T> results(n);
  std::vector<std::exception_ptr> errors(n);
  size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, max_in_flight)));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto &t : pool) t.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace ptm

#endif  // PTM_BASE_PARALLEL_H_
