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

#ifndef RVQLAB_CODEBOOK_HPP
#define RVQLAB_CODEBOOK_HPP

#include "rvqlab/channel.hpp"
#include "rvqlab/numerics.hpp"
#include "rvqlab/rng.hpp"

#include <string>
#include <vector>

namespace rvqlab
{
    inline constexpr unsigned max_codebook_bits = 24;

    enum class CodebookKind
    {
        raw_rvq,
        skewed
    };

    struct Codebook
    {
        std::vector<CVector> vectors; // 2^bits unit-norm entries
        unsigned bits = 0;
        CodebookKind kind = CodebookKind::raw_rvq;
        std::string skew_id; // set for skewed codebooks

        std::size_t size() const noexcept { return vectors.size(); }
    };

    struct BeamSelection
    {
        std::size_t index = 0; // zero-based position of the winner
        double metric = 0.0;   // f^H H^H H f
        double snr_rx = 0.0;   // rho * metric
    };

    Codebook generate_rvq(std::size_t n_t, unsigned bits, RngStream &rng);

    // Entries A f / |A f|. Throws SingularSkewError unless sigma_min(A) > 1e-12 sigma_max(A).
    Codebook skew_codebook(const Codebook &base, const ComplexMatrix &a, std::string skew_id = "A");

    // Argmax of f^H gram f, lowest index on ties
    BeamSelection select(const Codebook &codebook, const ChannelRealization &channel, double rho = 1.0);

    struct MutualInfoPair
    {
        double i_perf = 0.0; // log2(1 + rho lambda_1)
        double i_lim = 0.0;  // log2(1 + rho metric)
    };

    MutualInfoPair mutual_info_pair(const ChannelRealization &channel, const BeamSelection &selection, double rho);

    // Best metric of a fresh RVQ codebook drawn from rng, without storing it.
    // Consumes the stream exactly like generate_rvq followed by select.
    double best_rvq_metric(const ComplexMatrix &gram, unsigned bits, RngStream &rng);

    // Same for the codebook skewed by a: max over i of (A f_i)^H gram (A f_i) / |A f_i|^2
    double best_skewed_metric(const ComplexMatrix &gram, const ComplexMatrix &a, unsigned bits, RngStream &rng);

    // Throws SingularSkewError if the singular value ratio of a is at most 1e-12
    void require_full_rank(const ComplexMatrix &a);
}

#endif
