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

#include "rvqlab/wnorm.hpp"
#include "rvqlab/errors.hpp"
#include "rvqlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rvqlab
{
    WeightedNormLaw::WeightedNormLaw(EigenSpectrum lambda) : lambda_(std::move(lambda))
    {
        if (lambda_.size() == 0)
            throw PreconditionError("WeightedNormLaw: empty spectrum");
    }

    void WeightedNormLaw::require_gap(double gap) const
    {
        if (gap < gap_tolerance * lambda_.front())
            throw DegenerateSpectrumError("WeightedNormLaw: eigenvalue gap below tolerance");
    }

    double WeightedNormLaw::top_segment_cdf(double x) const
    {
        const double l1 = lambda_[0];
        require_gap(l1 - lambda_[1]);
        double tail = 1.0;
        for (std::size_t j = 1; j < n(); ++j)
            tail *= (l1 - x) / (l1 - lambda_[j]);
        return 1.0 - tail;
    }

    double WeightedNormLaw::cdf(double x) const
    {
        const std::size_t n = this->n();
        const double l1 = lambda_.front(), ln = lambda_.back();
        if (x >= l1)
            return 1.0;
        if (x < ln)
            return 0.0;
        if (x == ln)
            return 0.0; // l1 > ln here, so the atom-free law has F(ln) = 0
        if (x >= lambda_[1])
            return top_segment_cdf(x);

        // x in (lambda_n, lambda_2), so n >= 3
        if (n == 3)
        {
            const double l2 = lambda_[1], l3 = lambda_[2];
            require_gap(l2 - l3);
            return (x - l3) * (x - l3) / ((l1 - l3) * (l2 - l3));
        }
        if (n == 4)
        {
            const double l2 = lambda_[1], l3 = lambda_[2], l4 = lambda_[3];
            if (x <= l3)
            {
                require_gap(l3 - l4);
                const double u = x - l4;
                return u * u * u / ((l1 - l4) * (l2 - l4) * (l3 - l4));
            }
            // x in (l3, l2): F(l3) plus the integrated middle density
            require_gap(l2 - l3);
            const double at_l3 = (l3 > l4) ? (l3 - l4) * (l3 - l4) / ((l1 - l4) * (l2 - l4)) : 0.0;
            const double u = x - l3;
            const double first = ((l2 - l3) * u * u / 2.0 - u * u * u / 3.0) / (l2 - l3);
            const double span = l1 - l4;
            auto prim = [span](double v)
            { return span * v * v / 2.0 - v * v * v / 3.0; };
            const double second = (prim(x - l4) - prim(l3 - l4)) / span;
            return at_l3 + 3.0 / ((l1 - l3) * (l2 - l4)) * (first + second);
        }
        throw UnsupportedRegionError("WeightedNormLaw::cdf: interior region needs n <= 4");
    }

    double WeightedNormLaw::pdf(double x) const
    {
        const std::size_t n = this->n();
        if (n < 2)
            throw DegenerateSpectrumError("WeightedNormLaw::pdf: point mass has no density");
        if (n > 4)
            throw UnsupportedError("WeightedNormLaw::pdf: closed form needs n <= 4");
        const double l1 = lambda_.front(), ln = lambda_.back();
        if (l1 == ln)
            throw DegenerateSpectrumError("WeightedNormLaw::pdf: all eigenvalues equal");
        if (x < ln || x > l1)
            return 0.0;

        const double l2 = lambda_[1];
        if (x >= l2 && l1 > l2)
        {
            require_gap(l1 - l2);
            double denom = 1.0;
            for (std::size_t j = 1; j < n; ++j)
                denom *= l1 - lambda_[j];
            return double(n - 1) * std::pow(l1 - x, double(n - 2)) / denom;
        }
        if (n == 2)
            throw DegenerateSpectrumError("WeightedNormLaw::pdf: zero-width support");
        if (n == 3)
        {
            const double l3 = lambda_[2];
            require_gap(l2 - l3);
            return 2.0 * (x - l3) / ((l1 - l3) * (l2 - l3));
        }
        const double l3 = lambda_[2], l4 = lambda_[3];
        if (x >= l3 && l2 > l3)
        {
            require_gap(l2 - l3);
            require_gap(l1 - l4);
            const double k2 = (x - l3) * (l2 - x) / (l2 - l3) + (x - l4) * (l1 - x) / (l1 - l4);
            return 3.0 / ((l1 - l3) * (l2 - l4)) * k2;
        }
        require_gap(l3 - l4);
        const double u = x - l4;
        return 3.0 * u * u / ((l1 - l4) * (l2 - l4) * (l3 - l4));
    }

    std::vector<double> empirical_cdf(const WeightedNormLaw &law, std::size_t n_samples, const RngStream &rng)
    {
        if (n_samples == 0)
            throw PreconditionError("empirical_cdf: need at least one sample");
        constexpr std::size_t block = 4096;
        const std::size_t n_blocks = (n_samples + block - 1) / block;
        const auto &lam = law.lambda().values();
        std::vector<double> out(n_samples);
        parallel_for(n_blocks, [&](std::size_t b)
                     {
                         RngStream s = rng.child(b);
                         const std::size_t lo = b * block, hi = std::min(n_samples, lo + block);
                         for (std::size_t i = lo; i < hi; ++i)
                         {
                             CVector f = sample_isotropic(lam.size(), s);
                             double acc = 0.0;
                             for (std::size_t k = 0; k < lam.size(); ++k)
                                 acc += std::norm(f[k]) * lam[k];
                             out[i] = acc;
                         } });
        std::sort(out.begin(), out.end());
        return out;
    }

    double empirical_cdf_at(const std::vector<double> &sorted_samples, double x)
    {
        if (sorted_samples.empty())
            return 0.0;
        auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
        return double(it - sorted_samples.begin()) / double(sorted_samples.size());
    }

    double ellipsoid_cap_volume_2(double lambda1, double lambda2, double x, double r_sq)
    {
        if (!(lambda2 > 0.0) || !(lambda1 >= lambda2))
            throw PreconditionError("ellipsoid_cap_volume_2: need lambda1 >= lambda2 > 0");
        if (lambda1 == lambda2)
            throw DegenerateSpectrumError("ellipsoid_cap_volume_2: equal eigenvalues");
        if (!(x >= 0.0) || !(r_sq > 0.0))
            throw PreconditionError("ellipsoid_cap_volume_2: need x >= 0 and r_sq > 0");
        const double half_pi_sq = std::numbers::pi * std::numbers::pi / 2.0;
        if (r_sq * lambda1 <= x)
            return 0.0;
        if (r_sq * lambda2 >= x)
            return half_pi_sq * (r_sq * r_sq - x * x / (lambda1 * lambda2));
        const double d = r_sq * lambda1 - x;
        return half_pi_sq * d * d / (lambda1 * (lambda1 - lambda2));
    }

    double ball_volume(std::size_t n, double r_sq)
    {
        if (n == 0)
            throw PreconditionError("ball_volume: dimension must be at least 1");
        if (!(r_sq > 0.0))
            throw PreconditionError("ball_volume: r_sq must be positive");
        const double dn = double(n);
        return std::exp(dn * std::log(std::numbers::pi) + dn * std::log(r_sq) - ln_gamma(dn + 1.0));
    }
}
