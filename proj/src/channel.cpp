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

#include "rvqlab/channel.hpp"
#include "rvqlab/errors.hpp"

#include <cmath>

namespace rvqlab
{
    namespace
    {
        template <class... Ts>
        struct overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <class... Ts>
        overloaded(Ts...) -> overloaded<Ts...>;

        std::vector<double> sqrt_values(const EigenSpectrum &s)
        {
            std::vector<double> out(s.size());
            for (std::size_t i = 0; i < s.size(); ++i)
                out[i] = std::sqrt(s[i]);
            return out;
        }

        // diag(d) * M, scaling rows
        void scale_rows(ComplexMatrix &m, const std::vector<double> &d)
        {
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c)
                    m(r, c) *= d[r];
        }

        void scale_cols(ComplexMatrix &m, const std::vector<double> &d)
        {
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c)
                    m(r, c) *= d[c];
        }

        // U diag(lambda) U^H
        ComplexMatrix frame_product(const ComplexMatrix &u, const EigenSpectrum &lambda, double scale)
        {
            ComplexMatrix ud = u;
            std::vector<double> d(lambda.values());
            for (auto &x : d)
                x *= scale;
            scale_cols(ud, d);
            return ud * u.adjoint();
        }
    }

    ChannelRealization make_realization(ComplexMatrix h)
    {
        ChannelRealization out;
        out.gram = adjoint_times(h, h);
        out.h = std::move(h);
        HermitianEigen eig = hermitian_eig(out.gram);
        out.spectrum = eig.spectrum();
        out.eigvectors = std::move(eig.vectors);
        out.u_dominant = out.eigvectors.column(0);
        return out;
    }

    ChannelRealization diagonal_channel(const EigenSpectrum &lambda)
    {
        if (lambda.size() == 0)
            throw PreconditionError("diagonal_channel: empty spectrum");
        return make_realization(ComplexMatrix::diagonal(sqrt_values(lambda)));
    }

    std::size_t model_n_t(const ChannelModel &model)
    {
        return std::visit(overloaded{[](const IidModel &m)
                                     { return m.n_t; },
                                     [](const KroneckerModel &m)
                                     { return m.lambda_t.size(); },
                                     [](const FixedSpectrumModel &m)
                                     { return m.lambda.size(); }},
                          model);
    }

    std::size_t model_n_r(const ChannelModel &model)
    {
        return std::visit(overloaded{[](const IidModel &m)
                                     { return m.n_r; },
                                     [](const KroneckerModel &m)
                                     { return m.lambda_r.size(); },
                                     [](const FixedSpectrumModel &m)
                                     { return m.lambda.size(); }},
                          model);
    }

    void validate_model(const ChannelModel &model)
    {
        std::visit(overloaded{[](const IidModel &m)
                              {
                                  if (m.n_t == 0 || m.n_r == 0)
                                      throw PreconditionError("IID model: antenna counts must be positive");
                                  if (!(m.power_scale >= 0.0))
                                      throw PreconditionError("IID model: power scale must be nonnegative");
                              },
                              [](const KroneckerModel &m)
                              {
                                  if (m.lambda_t.size() == 0 || m.lambda_r.size() == 0)
                                      throw PreconditionError("Kronecker model: empty spectrum");
                                  if (m.u_t.rows() != m.lambda_t.size() || m.u_t.cols() != m.lambda_t.size())
                                      throw PreconditionError("Kronecker model: U_t does not match lambda_t");
                                  if (m.u_r.rows() != m.lambda_r.size() || m.u_r.cols() != m.lambda_r.size())
                                      throw PreconditionError("Kronecker model: U_r does not match lambda_r");
                              },
                              [](const FixedSpectrumModel &m)
                              {
                                  if (m.lambda.size() == 0)
                                      throw PreconditionError("FixedSpectrum model: empty spectrum");
                              }},
                   model);
    }

    ChannelRealization sample_channel(const ChannelModel &model, RngStream &rng)
    {
        validate_model(model);
        return std::visit(
            overloaded{[&](const IidModel &m)
                       {
                           ComplexMatrix h = sample_gaussian_matrix(m.n_r, m.n_t, rng);
                           h *= std::sqrt(m.power_scale);
                           return make_realization(std::move(h));
                       },
                       [&](const KroneckerModel &m)
                       {
                           ComplexMatrix g = sample_gaussian_matrix(m.lambda_r.size(), m.lambda_t.size(), rng);
                           scale_rows(g, sqrt_values(m.lambda_r));
                           scale_cols(g, sqrt_values(m.lambda_t));
                           return make_realization(m.u_r * g * m.u_t.adjoint());
                       },
                       [&](const FixedSpectrumModel &m)
                       {
                           const std::size_t n = m.lambda.size();
                           ComplexMatrix d = ComplexMatrix::diagonal(sqrt_values(m.lambda));
                           if (m.frozen)
                               return make_realization(std::move(d));
                           ComplexMatrix v = sample_haar_unitary(n, rng);
                           ComplexMatrix w = sample_haar_unitary(n, rng);
                           return make_realization(v * d * w.adjoint());
                       }},
            model);
    }

    double expected_power(const ChannelModel &model)
    {
        return std::visit(overloaded{[](const IidModel &m)
                                     { return double(m.n_t * m.n_r) * m.power_scale; },
                                     [](const KroneckerModel &m)
                                     { return m.lambda_t.sum() * m.lambda_r.sum(); },
                                     [](const FixedSpectrumModel &m)
                                     { return m.lambda.sum(); }},
                          model);
    }

    ChannelModel normalize_power(const ChannelModel &model, double rho_c)
    {
        if (!(rho_c > 0.0))
            throw PreconditionError("normalize_power: rho_c must be positive");
        validate_model(model);
        const double p = expected_power(model);
        if (!(p > 0.0))
            throw DomainError("normalize_power: model has zero power");
        const double c = rho_c / p;
        return std::visit(overloaded{[&](const IidModel &m) -> ChannelModel
                                     {
                                         IidModel out = m;
                                         out.power_scale *= c;
                                         return out;
                                     },
                                     [&](const KroneckerModel &m) -> ChannelModel
                                     {
                                         KroneckerModel out = m;
                                         out.lambda_t = m.lambda_t.scaled(std::sqrt(c));
                                         out.lambda_r = m.lambda_r.scaled(std::sqrt(c));
                                         return out;
                                     },
                                     [&](const FixedSpectrumModel &m) -> ChannelModel
                                     {
                                         FixedSpectrumModel out = m;
                                         out.lambda = m.lambda.scaled(c);
                                         return out;
                                     }},
                          model);
    }

    CovariancePair transmit_covariance(const ChannelModel &model)
    {
        validate_model(model);
        return std::visit(
            overloaded{[](const IidModel &m)
                       {
                           CovariancePair out;
                           out.sigma_t = ComplexMatrix::identity(m.n_t);
                           out.sigma_t *= double(m.n_r) * m.power_scale;
                           out.sigma_r = ComplexMatrix::identity(m.n_r);
                           out.sigma_r *= double(m.n_t) * m.power_scale;
                           return out;
                       },
                       [](const KroneckerModel &m)
                       {
                           return CovariancePair{frame_product(m.u_t, m.lambda_t, m.lambda_r.sum()),
                                                 frame_product(m.u_r, m.lambda_r, m.lambda_t.sum())};
                       },
                       [](const FixedSpectrumModel &) -> CovariancePair
                       {
                           throw UnsupportedError("transmit_covariance: FixedSpectrum statistics depend on the frame");
                       }},
            model);
    }

    KroneckerModel kronecker_from_covariances(const ComplexMatrix &sigma_t, const ComplexMatrix &sigma_r)
    {
        HermitianEigen et = hermitian_eig(sigma_t);
        HermitianEigen er = hermitian_eig(sigma_r);
        EigenSpectrum st = et.spectrum(), sr = er.spectrum();
        const double tt = st.sum(), tr = sr.sum();
        if (!(tt > 0.0) || !(tr > 0.0))
            throw DomainError("kronecker_from_covariances: zero-power covariance");
        if (std::abs(tt - tr) > 1e-9 * std::max(tt, tr))
            throw PreconditionError("kronecker_from_covariances: covariance traces differ");
        const double a = 1.0 / std::sqrt(tt);
        return KroneckerModel{std::move(et.vectors), st.scaled(a), std::move(er.vectors), sr.scaled(a)};
    }
}
