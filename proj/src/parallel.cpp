// SPDX-License-Identifier: Apache-2.0
//
// rvqlab: limited-feedback beamforming loss analysis for RVQ codebooks
// Copyright (C) 2026 rvqlab contributors
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

#include "rvqlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rvqlab
{
    namespace
    {
        std::atomic<unsigned> g_workers{1};
    }

    void set_worker_count(unsigned n)
    {
        if (n == 0)
            n = std::max(1u, std::thread::hardware_concurrency());
        g_workers.store(n);
    }

    unsigned worker_count() { return g_workers.load(); }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
    {
        const std::size_t workers = std::min<std::size_t>(worker_count(), n);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::mutex err_mutex;
        std::size_t err_index = n;
        std::exception_ptr err;

        auto run = [&]()
        {
            for (;;)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (i < err_index)
                    {
                        err_index = i;
                        err = std::current_exception();
                    }
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(run);
        run();
        for (auto &t : pool)
            t.join();
        if (err)
            std::rethrow_exception(err);
    }
}
