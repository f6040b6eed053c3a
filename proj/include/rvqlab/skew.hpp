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

#ifndef RVQLAB_SKEW_HPP
#define RVQLAB_SKEW_HPP

#include "rvqlab/channel.hpp"
#include "rvqlab/loss.hpp"
#include "rvqlab/numerics.hpp"
#include "rvqlab/rng.hpp"

#include <vector>

namespace rvqlab
{
    struct SkewMatrix
    {
        ComplexMatrix a;
        EigenSpectrum eig_ata; // of A^H A
        EigenSpectrum eig_aat; // of A A^H
    };

    // PreconditionError unless square; SingularSkewError unless full rank
    SkewMatrix make_skew(const ComplexMatrix &a);

    struct EffectiveSpectra
    {
        EigenSpectrum ahha; // A^H H^H H A
        EigenSpectrum ata;
        EigenSpectrum aat;
    };

    EffectiveSpectra effective_spectra(const ChannelRealization &channel, const SkewMatrix &skew);

    // Eigenvalues of A^H H^H H A - x A^H A for N_t = 2
    struct PencilEigs
    {
        double gamma1 = 0.0; // >= 0 on [lambda_2, lambda_1]
        double gamma2 = 0.0; // <= 0 on [lambda_2, lambda_1]
    };

    PencilEigs pencil_eigs_2(const ChannelRealization &channel, const SkewMatrix &skew, double x);

    // Rayleigh quotients (A f)^H gram (A f) / |A f|^2 for isotropic f
    std::vector<double> rayleigh_quotient_samples(const ChannelRealization &channel, const SkewMatrix &skew,
                                                  std::size_t n, const RngStream &rng);

    LossEstimate delta1_sk_mc(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits,
                              std::size_t n_codebooks, const RngStream &rng);
    LossEstimate delta1_sk_exact2(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits);
    LossEstimate delta1_sk_upper2(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits);
    double c4_factor(const ChannelRealization &channel, const SkewMatrix &skew);
    double dsk_factor(const ChannelRealization &channel, const SkewMatrix &skew);
    LossEstimate delta1_sk_asympt(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits);

    // Channel-averaged Delta_1 of the skewed codebook; same stream layout as avg_delta_snr
    LossEstimate avg_delta_snr_sk(const ChannelModel &model, const SkewMatrix &skew, unsigned bits,
                                  std::size_t n_channels, std::size_t n_codebooks, const RngStream &rng);

    // NaN marks a field whose denominator vanishes or whose index does not exist
    struct SkewDiagnostics
    {
        double m1 = 0.0, m2 = 0.0, d_sk = 0.0;
        double l1 = 0.0, l2 = 0.0, l3 = 0.0, l4 = 0.0, l5 = 0.0, l6 = 0.0;
        double chi_ha = 0.0, chi_a = 0.0;
    };

    SkewDiagnostics skew_diagnostics(const ChannelRealization &channel, const SkewMatrix &skew, double alpha);

    // U_t (alpha Lambda_t^beta + (1 - alpha) Lambda_t^(-1/2)) U_t^H
    SkewMatrix build_skew_a2(const ComplexMatrix &sigma_t, double alpha, double beta);

    struct SkewOptimization
    {
        SkewMatrix skew;
        double objective = 0.0;          // mean of alpha M1 + (1 - alpha) M2 over the sampled channels
        double identity_objective = 0.0; // same channels, A = I
        std::size_t evaluations = 0;
        std::size_t winning_restart = 0;
    };

    // Nelder-Mead over A = Q diag(d), Q a product of complex Givens rotations.
    // Eight restarts share the budget; all use the same channel draws.
    SkewOptimization optimize_skew_a1(const ChannelModel &model, double alpha, std::size_t n_channels,
                                      const RngStream &rng, std::size_t budget);

    double skew_objective(const std::vector<ChannelRealization> &channels, const ComplexMatrix &a, double alpha);

    struct ReverseCsResult
    {
        double bound = 0.0;
        double empirical = 0.0;
        bool holds = false;
    };

    // bound = (E[X^k] - x^k)^2 / E[X^2k] against the fraction of samples above x
    ReverseCsResult reverse_cs_check(const std::vector<double> &samples, unsigned k, double x);
}

#endif
