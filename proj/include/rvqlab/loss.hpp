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

#ifndef RVQLAB_LOSS_HPP
#define RVQLAB_LOSS_HPP

#include "rvqlab/channel.hpp"
#include "rvqlab/numerics.hpp"
#include "rvqlab/rng.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace rvqlab
{
    enum class EstimateMethod
    {
        monte_carlo,
        exact,
        approx,
        asymptotic,
        quadrature
    };

    std::string to_string(EstimateMethod method);

    // Delta_1 is dimensionless, Delta_2 is in bits
    struct LossEstimate
    {
        double value = 0.0;
        EstimateMethod method = EstimateMethod::exact;
        std::optional<double> std_error;       // set iff monte_carlo
        std::optional<double> reference_ratio; // value / quadrature oracle, asymptotic forms only
        std::string note;
    };

    // Closed forms index into factorial-sized sums; above this they are refused
    inline constexpr unsigned max_closed_form_bits = 20;

    struct QuantizationFactors
    {
        double m = 0.0;     // 2^B
        double a_n = 0.0;   // 1 / (m (N-1) + 1)
        double p = 0.0;     // 2/(N-1) - 1
        double d = 0.0;     // 1 - prod_{j>=2} (l1-l2)/(l1-lj)
        double kappa = 0.0; // Gamma(1/(N-1))
    };

    struct MiFactors2
    {
        double z = 0.0; // rho (l1-l2) / (1 + rho l2)
        double s = 0.0; // (1 + rho l2) / rho
    };

    struct HardeningApprox
    {
        double d1 = 0.0;
        double d2 = 0.0;
        double product = 0.0;
    };

    enum class AsymptoticForm
    {
        prop3,     // per-N_t dominant term with 1/(1 + rho l1) weighting
        corollary3 // single formula valid for every N_t
    };

    QuantizationFactors quantization_factors(const EigenSpectrum &lambda, unsigned bits);
    MiFactors2 mi_factors_2(const EigenSpectrum &lambda, double rho);

    // sum_{k=0}^m c_k D^(m-k), c_0 = 1, c_k = 2^k m!/(m-k)! / prod_{j=1}^k (2m+p-2j+1)
    double reduction_series(double m, double p, double d);

    // Sample mean and standard error of the mean; needs at least two samples
    LossEstimate mc_estimate(std::span<const double> samples);

    LossEstimate delta1_mc(const ChannelRealization &channel, unsigned bits, std::size_t n_codebooks,
                           const RngStream &rng);
    LossEstimate delta1_quadrature(const EigenSpectrum &lambda, unsigned bits);
    LossEstimate delta1_exact(const EigenSpectrum &lambda, unsigned bits);
    LossEstimate delta1_appx(const EigenSpectrum &lambda, unsigned bits);
    double epsilon_b(const EigenSpectrum &lambda, unsigned bits);
    double log2_epsilon_b(const EigenSpectrum &lambda, unsigned bits); // survives D^m underflow
    LossEstimate delta1_asympt(const EigenSpectrum &lambda, unsigned bits);
    LossEstimate delta1_miso(std::size_t n_t, unsigned bits);

    LossEstimate delta2_mc(const ChannelRealization &channel, unsigned bits, double rho, std::size_t n_codebooks,
                           const RngStream &rng);
    LossEstimate delta2_quadrature(const EigenSpectrum &lambda, double rho, unsigned bits);
    LossEstimate delta2_exact2(const EigenSpectrum &lambda, double rho, unsigned bits);
    LossEstimate delta2_appx(const EigenSpectrum &lambda, double rho, unsigned bits);
    LossEstimate delta2_method2(const EigenSpectrum &lambda, double rho, unsigned bits);
    double epsilon_b_prime(const EigenSpectrum &lambda, double rho, unsigned bits);
    double log2_epsilon_b_prime(const EigenSpectrum &lambda, double rho, unsigned bits);
    LossEstimate delta2_asympt(const EigenSpectrum &lambda, double rho, unsigned bits, AsymptoticForm form);

    // Per-(channel, codebook) loss sample; the stream belongs to that codebook
    using ChannelLossSample = std::function<double(const ChannelRealization &, RngStream &)>;

    // Channel c is drawn from rng.child(c), codebook k of channel c from rng.child(c).child(k)
    LossEstimate channel_average(const ChannelModel &model, std::size_t n_channels, std::size_t n_codebooks,
                                 const RngStream &rng, const ChannelLossSample &sample);

    // Channel averages: Delta_1 (or I_perf - I_lim) over n_channels draws x n_codebooks codebooks.
    // Standard error from the spread of per-channel means.
    LossEstimate avg_delta_snr(const ChannelModel &model, unsigned bits, std::size_t n_channels,
                               std::size_t n_codebooks, const RngStream &rng);
    LossEstimate avg_delta_mi(const ChannelModel &model, unsigned bits, double rho, std::size_t n_channels,
                              std::size_t n_codebooks, const RngStream &rng);

    HardeningApprox hardening_approx(const ComplexMatrix &sigma_t);
}

#endif
