// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - link-level simulation and power allocation for rate-splitting
// multiple access in decode-and-forward relay networks
// Copyright (C) 2026 the rsrelay contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef rsrelay_parallel_for_H
#define rsrelay_parallel_for_H

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rsrelay
{
namespace detail
{

// Runs fn(i) for every i in [0, n) on a transient pool of n_threads workers
// (0 picks the hardware concurrency). Indices are handed out through a
// shared counter, so fn must write to per-index slots for deterministic
// results. The first exception thrown by any worker is rethrown on the
// calling thread after all workers have stopped.
template <typename Fn>
void parallel_for(std::size_t n, unsigned n_threads, Fn &&fn)
{
    if (n == 0)
        return;

    if (n_threads == 0)
    {
        unsigned hw = std::thread::hardware_concurrency();
        n_threads = hw > 0 ? hw : 1;
    }
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n));

    if (n_threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;)
        {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                }
                next.store(n, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();

    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace detail
} // namespace rsrelay

#endif
