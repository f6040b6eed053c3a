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

#include "rvqlab/rng.hpp"
#include "rvqlab/errors.hpp"

#include <cmath>
#include <numbers>

namespace rvqlab
{
    namespace
    {
        // SplitMix64 finalizer
        constexpr std::uint64_t mix64(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

        constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream)
        {
            std::uint64_t h = mix64(seed + golden);
            h = mix64(h ^ (stream * 0xd1b54a32d192ed03ULL + golden));
            return mix64(h + 0x632be59bd9b4e019ULL);
        }
    }

    RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id), key_(derive_key(master_seed, stream_id)) {}

    RngStream RngStream::child(std::uint64_t index) const
    {
        return RngStream(master_seed_, mix64(stream_id_ ^ mix64(index + 0x8cb92ba72f3d8dd7ULL)));
    }

    std::uint64_t RngStream::next_u64()
    {
        const std::uint64_t i = counter_++;
        return mix64(key_ + (i + 1) * golden);
    }

    double RngStream::uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    cplx RngStream::complex_normal()
    {
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

    CVector sample_isotropic(std::size_t dim, RngStream &rng)
    {
        if (dim == 0)
            throw PreconditionError("sample_isotropic: dimension must be at least 1");
        CVector v(dim);
        double n = 0.0;
        do
        {
            for (auto &e : v)
                e = rng.complex_normal();
            n = norm2(v);
        } while (n == 0.0);
        for (auto &e : v)
            e /= n;
        return v;
    }

    ComplexMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, RngStream &rng)
    {
        ComplexMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                m(r, c) = rng.complex_normal();
        return m;
    }

    ComplexMatrix sample_haar_unitary(std::size_t n, RngStream &rng)
    {
        ComplexMatrix q = sample_gaussian_matrix(n, n, rng);
        // Modified Gram-Schmidt on columns; positive real diagonal of R gives the Haar law
        for (std::size_t k = 0; k < n; ++k)
        {
            for (std::size_t j = 0; j < k; ++j)
            {
                cplx proj = 0.0;
                for (std::size_t r = 0; r < n; ++r)
                    proj += std::conj(q(r, j)) * q(r, k);
                for (std::size_t r = 0; r < n; ++r)
                    q(r, k) -= proj * q(r, j);
            }
            double nrm = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                nrm += std::norm(q(r, k));
            nrm = std::sqrt(nrm);
            if (nrm == 0.0)
                throw DomainError("sample_haar_unitary: rank-deficient draw");
            for (std::size_t r = 0; r < n; ++r)
                q(r, k) /= nrm;
        }
        return q;
    }
}
