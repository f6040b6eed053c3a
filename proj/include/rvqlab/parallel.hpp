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

#ifndef RVQLAB_PARALLEL_HPP
#define RVQLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace rvqlab
{
    // Process-wide worker count used by every Monte Carlo routine. 0 selects hardware concurrency.
    void set_worker_count(unsigned n);
    unsigned worker_count();

    // Calls body(i) for i in [0, n). Each index is visited exactly once; callers write
    // results into slot i and reduce in index order, so output never depends on the
    // worker count. The exception of the lowest failing index is rethrown.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);
}

#endif
