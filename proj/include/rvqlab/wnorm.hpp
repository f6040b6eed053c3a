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

#ifndef RVQLAB_WNORM_HPP
#define RVQLAB_WNORM_HPP

#include "rvqlab/numerics.hpp"
#include "rvqlab/rng.hpp"

#include <vector>

namespace rvqlab
{
    // Law of f^H diag(lambda) f for isotropic unit-norm f. Support is [lambda_n, lambda_1].
    //
    // Closed forms:
    //   n = 2, 3   full support
    //   n = 4      full support (lower pieces from integrating the piecewise density)
    //   n >= 5     only the top segment [lambda_2, lambda_1]
    // A gap below 1e-9 * lambda_1 that a branch divides by raises DegenerateSpectrumError.
    class WeightedNormLaw
    {
    public:
        explicit WeightedNormLaw(EigenSpectrum lambda);

        const EigenSpectrum &lambda() const noexcept { return lambda_; }
        std::size_t n() const noexcept { return lambda_.size(); }

        double cdf(double x) const;
        double pdf(double x) const;

        // Relative gap threshold for degenerate branches
        static constexpr double gap_tolerance = 1e-9;

    private:
        EigenSpectrum lambda_;
        double top_segment_cdf(double x) const;
        void require_gap(double gap) const;
    };

    // Sorted samples of f^H diag(lambda) f; parallel over fixed blocks with derived streams
    std::vector<double> empirical_cdf(const WeightedNormLaw &law, std::size_t n_samples, const RngStream &rng);

    // Step function value of sorted samples at x: fraction <= x
    double empirical_cdf_at(const std::vector<double> &sorted_samples, double x);

    // Volume of {f : f^H diag(l1,l2) f >= x, |f|^2 <= r_sq} in C^2
    double ellipsoid_cap_volume_2(double lambda1, double lambda2, double x, double r_sq);

    // Volume of the complex n-ball of squared radius r_sq
    double ball_volume(std::size_t n, double r_sq);
}

#endif
