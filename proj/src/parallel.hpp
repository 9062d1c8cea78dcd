// Copyright 2026 The m50 Authors
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mobility::detail {

// Runs fn(task, worker) for every task in [0, n_tasks) on up to `workers`
// threads. Tasks are handed out in index order. The first exception stops the
// hand-out and is rethrown once every thread has joined.
template <typename Fn>
void parallel_for(std::size_t n_tasks, std::size_t workers, Fn&& fn) {
  if (n_tasks == 0) return;
  workers = std::clamp<std::size_t>(workers, 1, n_tasks);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto body = [&](std::size_t worker) {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      try {
        fn(task, worker);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(body, w);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mobility::detail
