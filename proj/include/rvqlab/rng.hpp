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

#ifndef RVQLAB_RNG_HPP
#define RVQLAB_RNG_HPP

#include "rvqlab/numerics.hpp"

#include <cstdint>

namespace rvqlab
{
    // Counter-based stream. Output i is a mixing hash of (key, i), so the
    // sequence depends only on (master_seed, stream_id).
    class RngStream
    {
    public:
        RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

        std::uint64_t master_seed() const noexcept { return master_seed_; }
        std::uint64_t stream_id() const noexcept { return stream_id_; }
        std::uint64_t position() const noexcept { return counter_; }

        // Independent sub-stream; does not advance this stream
        RngStream child(std::uint64_t index) const;

        std::uint64_t next_u64();
        double uniform();   // in (0, 1]
        cplx complex_normal(); // circularly symmetric, E|z|^2 = 1

    private:
        std::uint64_t master_seed_, stream_id_;
        std::uint64_t key_;
        std::uint64_t counter_ = 0;
    };

    // Unit-norm vector with a unitarily invariant law
    CVector sample_isotropic(std::size_t dim, RngStream &rng);

    // Fills an n x n matrix with i.i.d. CN(0,1) entries
    ComplexMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, RngStream &rng);

    // Haar-distributed unitary (QR of a Gaussian matrix with phase fix)
    ComplexMatrix sample_haar_unitary(std::size_t n, RngStream &rng);
}

#endif
