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

#include "rvqlab/codebook.hpp"
#include "rvqlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rvqlab
{
    Codebook generate_rvq(std::size_t n_t, unsigned bits, RngStream &rng)
    {
        if (n_t == 0)
            throw PreconditionError("generate_rvq: n_t must be at least 1");
        if (bits > max_codebook_bits)
            throw ResourceLimitError("generate_rvq: bits exceed the cap of 24");
        Codebook cb;
        cb.bits = bits;
        const std::size_t m = std::size_t(1) << bits;
        cb.vectors.reserve(m);
        for (std::size_t i = 0; i < m; ++i)
            cb.vectors.push_back(sample_isotropic(n_t, rng));
        return cb;
    }

    void require_full_rank(const ComplexMatrix &a)
    {
        if (!a.is_square())
            throw PreconditionError("skew matrix must be square");
        const auto eig = hermitian_eig(adjoint_times(a, a));
        const double top = eig.values.front(), bottom = eig.values.back();
        // singular value ratio via squared values
        if (!(top > 0.0) || !(bottom > 1e-24 * top))
            throw SingularSkewError("skew matrix is rank deficient");
    }

    Codebook skew_codebook(const Codebook &base, const ComplexMatrix &a, std::string skew_id)
    {
        if (base.vectors.empty())
            return base;
        if (a.rows() != base.vectors.front().size())
            throw PreconditionError("skew_codebook: dimension mismatch");
        require_full_rank(a);
        Codebook out;
        out.bits = base.bits;
        out.kind = CodebookKind::skewed;
        out.skew_id = std::move(skew_id);
        out.vectors.reserve(base.size());
        for (const auto &f : base.vectors)
        {
            CVector g = a.apply(f);
            const double n = norm2(g);
            for (auto &e : g)
                e /= n;
            out.vectors.push_back(std::move(g));
        }
        return out;
    }

    BeamSelection select(const Codebook &codebook, const ChannelRealization &channel, double rho)
    {
        if (codebook.vectors.empty())
            throw PreconditionError("select: empty codebook");
        if (codebook.vectors.front().size() != channel.n_t())
            throw PreconditionError("select: dimension mismatch");
        BeamSelection best;
        best.metric = -INFINITY;
        for (std::size_t i = 0; i < codebook.size(); ++i)
        {
            const double q = quadratic_form(channel.gram, codebook.vectors[i]);
            if (q > best.metric)
            {
                best.metric = q;
                best.index = i;
            }
        }
        best.snr_rx = rho * best.metric;
        return best;
    }

    double best_rvq_metric(const ComplexMatrix &gram, unsigned bits, RngStream &rng)
    {
        if (bits > max_codebook_bits)
            throw ResourceLimitError("best_rvq_metric: bits exceed the cap of 24");
        const std::size_t m = std::size_t(1) << bits;
        double best = -INFINITY;
        for (std::size_t i = 0; i < m; ++i)
            best = std::max(best, quadratic_form(gram, sample_isotropic(gram.rows(), rng)));
        return best;
    }

    double best_skewed_metric(const ComplexMatrix &gram, const ComplexMatrix &a, unsigned bits, RngStream &rng)
    {
        if (bits > max_codebook_bits)
            throw ResourceLimitError("best_skewed_metric: bits exceed the cap of 24");
        const std::size_t m = std::size_t(1) << bits;
        double best = -INFINITY;
        for (std::size_t i = 0; i < m; ++i)
        {
            const CVector g = a.apply(sample_isotropic(a.cols(), rng));
            const double n2 = std::norm(norm2(g));
            best = std::max(best, quadratic_form(gram, g) / n2);
        }
        return best;
    }

    MutualInfoPair mutual_info_pair(const ChannelRealization &channel, const BeamSelection &selection, double rho)
    {
        if (!(rho > 0.0))
            throw PreconditionError("mutual_info_pair: rho must be positive");
        MutualInfoPair out;
        out.i_perf = std::log1p(rho * channel.spectrum.front()) / std::numbers::ln2;
        out.i_lim = std::log1p(rho * selection.metric) / std::numbers::ln2;
        return out;
    }
}
