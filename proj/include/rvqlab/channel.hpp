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

#ifndef RVQLAB_CHANNEL_HPP
#define RVQLAB_CHANNEL_HPP

#include "rvqlab/numerics.hpp"
#include "rvqlab/rng.hpp"

#include <variant>

namespace rvqlab
{
    // i.i.d. CN(0, power_scale) entries
    struct IidModel
    {
        std::size_t n_t = 0, n_r = 0;
        double power_scale = 1.0;
    };

    // H = U_r diag(lambda_r)^(1/2) H_iid diag(lambda_t)^(1/2) U_t^H
    struct KroneckerModel
    {
        ComplexMatrix u_t;
        EigenSpectrum lambda_t;
        ComplexMatrix u_r;
        EigenSpectrum lambda_r;
    };

    // Deterministic squared singular values in a random (or frozen identity) frame. Square N x N.
    struct FixedSpectrumModel
    {
        EigenSpectrum lambda;
        bool frozen = false;
    };

    using ChannelModel = std::variant<IidModel, KroneckerModel, FixedSpectrumModel>;

    struct ChannelRealization
    {
        ComplexMatrix h;          // N_r x N_t
        ComplexMatrix gram;       // H^H H
        EigenSpectrum spectrum;   // eigenvalues of gram, descending
        ComplexMatrix eigvectors; // columns match spectrum order
        CVector u_dominant;       // first column of eigvectors

        std::size_t n_t() const noexcept { return h.cols(); }
        std::size_t n_r() const noexcept { return h.rows(); }
    };

    struct CovariancePair
    {
        ComplexMatrix sigma_t;
        ComplexMatrix sigma_r;
    };

    ChannelRealization make_realization(ComplexMatrix h);

    // Square channel H = diag(sqrt(lambda)), gram = diag(lambda)
    ChannelRealization diagonal_channel(const EigenSpectrum &lambda);

    std::size_t model_n_t(const ChannelModel &model);
    std::size_t model_n_r(const ChannelModel &model);
    void validate_model(const ChannelModel &model);

    // Realization drawn from rng; the stream is advanced
    ChannelRealization sample_channel(const ChannelModel &model, RngStream &rng);

    // E[Tr(H^H H)] implied by the model parameters
    double expected_power(const ChannelModel &model);

    ChannelModel normalize_power(const ChannelModel &model, double rho_c);

    // Exact Sigma_t = E[H^H H] and Sigma_r = E[H H^H]; FixedSpectrum is unsupported
    CovariancePair transmit_covariance(const ChannelModel &model);

    // Kronecker model whose covariances equal the given Hermitian PSD targets (equal traces required)
    KroneckerModel kronecker_from_covariances(const ComplexMatrix &sigma_t, const ComplexMatrix &sigma_r);
}

#endif
