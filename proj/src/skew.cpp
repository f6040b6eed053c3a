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

#include "rvqlab/skew.hpp"
#include "rvqlab/codebook.hpp"
#include "rvqlab/errors.hpp"
#include "rvqlab/parallel.hpp"
#include "rvqlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rvqlab
{
    namespace
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        constexpr double inf = std::numeric_limits<double>::infinity();

        void require_dims(const ChannelRealization &channel, const SkewMatrix &skew)
        {
            if (skew.a.rows() != channel.n_t() || skew.a.cols() != channel.n_t())
                throw PreconditionError("skew matrix does not match N_t");
        }

        void require_two(const ChannelRealization &channel, const SkewMatrix &skew, const char *who)
        {
            require_dims(channel, skew);
            if (channel.n_t() != 2)
                throw PreconditionError(std::string(who) + ": needs N_t = 2");
            const double l1 = channel.spectrum[0], l2 = channel.spectrum[1];
            if (!(l1 > 0.0))
                throw ZeroChannelError(std::string(who) + ": lambda_1 is zero");
            if (l1 - l2 < 1e-9 * l1)
                throw DegenerateSpectrumError(std::string(who) + ": lambda_1 - lambda_2 below tolerance");
        }

        double ratio_or_nan(double num, double den)
        {
            return (den > 0.0 && std::isfinite(num)) ? num / den : nan;
        }

        // Q diag(d) with Q = base * prod of Givens(p, q, theta, phi)
        ComplexMatrix skew_from_params(const ComplexMatrix &base, const std::vector<double> &x, std::size_t n)
        {
            ComplexMatrix q = base;
            std::size_t idx = 0;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t r = p + 1; r < n; ++r)
                {
                    const double c = std::cos(x[idx]), s = std::sin(x[idx]);
                    const cplx ph = std::polar(1.0, x[idx + 1]);
                    idx += 2;
                    // right-multiply by the rotation acting on columns p and r
                    for (std::size_t row = 0; row < n; ++row)
                    {
                        const cplx vp = q(row, p), vr = q(row, r);
                        q(row, p) = c * vp + std::conj(ph) * s * vr;
                        q(row, r) = -ph * s * vp + c * vr;
                    }
                }
            for (std::size_t col = 0; col < n; ++col)
            {
                const double d = std::exp(x[idx + col]);
                for (std::size_t row = 0; row < n; ++row)
                    q(row, col) *= d;
            }
            return q;
        }

        struct Restart
        {
            ComplexMatrix base;
            std::vector<double> start;
        };

        struct SearchResult
        {
            std::vector<double> x;
            double f = inf;
            std::size_t evaluations = 0;
        };

        // Standard Nelder-Mead; stops when the evaluation budget is spent
        SearchResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                                 std::vector<double> start, std::size_t budget, double step)
        {
            SearchResult best;
            best.x = start;
            const std::size_t dim = start.size();
            auto eval = [&](const std::vector<double> &x)
            {
                if (best.evaluations >= budget)
                    return inf;
                ++best.evaluations;
                double v = f(x);
                if (!std::isfinite(v))
                    v = inf;
                if (v < best.f)
                {
                    best.f = v;
                    best.x = x;
                }
                return v;
            };

            std::vector<std::vector<double>> pts{start};
            std::vector<double> vals{eval(start)};
            for (std::size_t i = 0; i < dim && best.evaluations < budget; ++i)
            {
                auto p = start;
                p[i] += step;
                pts.push_back(p);
                vals.push_back(eval(p));
            }
            if (pts.size() < dim + 1)
                return best;

            std::vector<std::size_t> order(dim + 1);
            while (best.evaluations < budget)
            {
                std::iota(order.begin(), order.end(), std::size_t(0));
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                                 { return vals[a] < vals[b]; });
                const std::size_t lo = order.front(), hi = order.back(), second = order[dim - 1];
                std::vector<double> centroid(dim, 0.0);
                for (std::size_t k = 0; k < dim; ++k)
                    for (std::size_t i = 0; i < dim; ++i)
                        centroid[i] += pts[order[k]][i] / double(dim);
                auto along = [&](double t)
                {
                    std::vector<double> p(dim);
                    for (std::size_t i = 0; i < dim; ++i)
                        p[i] = centroid[i] + t * (pts[hi][i] - centroid[i]);
                    return p;
                };

                const auto xr = along(-1.0);
                const double fr = eval(xr);
                if (fr < vals[lo])
                {
                    const auto xe = along(-2.0);
                    const double fe = eval(xe);
                    if (fe < fr)
                        pts[hi] = xe, vals[hi] = fe;
                    else
                        pts[hi] = xr, vals[hi] = fr;
                    continue;
                }
                if (fr < vals[second])
                {
                    pts[hi] = xr, vals[hi] = fr;
                    continue;
                }
                const bool outside = fr < vals[hi];
                const auto xc = along(outside ? -0.5 : 0.5);
                const double fc = eval(xc);
                if (fc < (outside ? fr : vals[hi]))
                {
                    pts[hi] = xc, vals[hi] = fc;
                    continue;
                }
                for (std::size_t k = 1; k <= dim; ++k)
                {
                    auto &p = pts[order[k]];
                    for (std::size_t i = 0; i < dim; ++i)
                        p[i] = pts[lo][i] + 0.5 * (p[i] - pts[lo][i]);
                    vals[order[k]] = eval(p);
                }
            }
            return best;
        }
    }

    SkewMatrix make_skew(const ComplexMatrix &a)
    {
        require_full_rank(a);
        return SkewMatrix{a, hermitian_eig(adjoint_times(a, a)).spectrum(),
                          hermitian_eig(a * a.adjoint()).spectrum()};
    }

    EffectiveSpectra effective_spectra(const ChannelRealization &channel, const SkewMatrix &skew)
    {
        require_dims(channel, skew);
        const ComplexMatrix ha = channel.h * skew.a;
        return EffectiveSpectra{hermitian_eig(adjoint_times(ha, ha)).spectrum(),
                                hermitian_eig(adjoint_times(skew.a, skew.a)).spectrum(),
                                hermitian_eig(skew.a * skew.a.adjoint()).spectrum()};
    }

    PencilEigs pencil_eigs_2(const ChannelRealization &channel, const SkewMatrix &skew, double x)
    {
        require_dims(channel, skew);
        if (channel.n_t() != 2)
            throw PreconditionError("pencil_eigs_2: needs N_t = 2");
        const double l1 = channel.spectrum[0], l2 = channel.spectrum[1];
        const double slack = 1e-12 * std::max(l1, 1e-300);
        if (x < l2 - slack || x > l1 + slack)
            throw PreconditionError("pencil_eigs_2: x must lie in [lambda_2, lambda_1]");
        const ComplexMatrix m = adjoint_times(skew.a, channel.gram * skew.a);
        const ComplexMatrix n = adjoint_times(skew.a, skew.a);
        const double a = (m(0, 0) - x * n(0, 0)).real();
        const double d = (m(1, 1) - x * n(1, 1)).real();
        const cplx b = m(0, 1) - x * n(0, 1);
        const double h = (a + d) / 2.0;
        const double r = std::hypot((a - d) / 2.0, std::abs(b));
        const double det = a * d - std::norm(b);
        PencilEigs out;
        // the larger-magnitude root directly, the other from the determinant
        if (h >= 0.0)
        {
            out.gamma1 = h + r;
            out.gamma2 = out.gamma1 != 0.0 ? det / out.gamma1 : 0.0;
        }
        else
        {
            out.gamma2 = h - r;
            out.gamma1 = det / out.gamma2;
        }
        return out;
    }

    std::vector<double> rayleigh_quotient_samples(const ChannelRealization &channel, const SkewMatrix &skew,
                                                  std::size_t n, const RngStream &rng)
    {
        require_dims(channel, skew);
        std::vector<double> out(n);
        constexpr std::size_t block = 4096;
        parallel_for((n + block - 1) / block, [&](std::size_t b)
                     {
                         RngStream s = rng.child(b);
                         for (std::size_t i = b * block; i < std::min(n, (b + 1) * block); ++i)
                         {
                             const CVector g = skew.a.apply(sample_isotropic(channel.n_t(), s));
                             out[i] = quadratic_form(channel.gram, g) / std::norm(norm2(g));
                         } });
        return out;
    }

    LossEstimate delta1_sk_mc(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits,
                              std::size_t n_codebooks, const RngStream &rng)
    {
        require_dims(channel, skew);
        require_full_rank(skew.a);
        if (n_codebooks < 2)
            throw PreconditionError("delta1_sk_mc: need at least two codebooks");
        const double l1 = channel.spectrum.front();
        if (!(l1 > 0.0))
            throw ZeroChannelError("delta1_sk_mc: lambda_1 is zero");
        std::vector<double> samples(n_codebooks);
        parallel_for(n_codebooks, [&](std::size_t k)
                     {
                         RngStream s = rng.child(k);
                         const double metric = best_skewed_metric(channel.gram, skew.a, bits, s);
                         samples[k] = std::max(0.0, 1.0 - metric / l1); });
        return mc_estimate(samples);
    }

    LossEstimate delta1_sk_exact2(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits)
    {
        require_two(channel, skew, "delta1_sk_exact2");
        require_full_rank(skew.a);
        if (bits > max_closed_form_bits)
            throw UnsupportedError("delta1_sk_exact2: limited to B <= 20");
        const double l1 = channel.spectrum[0], l2 = channel.spectrum[1];
        const double m = std::ldexp(1.0, int(bits));
        auto integrand = [&](double t)
        {
            const PencilEigs g = pencil_eigs_2(channel, skew, t * l1);
            const double span = g.gamma1 - g.gamma2;
            if (!(span > 0.0))
                return 0.0;
            const double p = std::clamp(-g.gamma2 / span, 0.0, 1.0);
            return p == 0.0 ? 0.0 : std::exp(m * std::log(p));
        };
        const double inset = 1e-12 * (l1 - l2) / l1;
        QuadratureOptions opt;
        opt.abs_tol = 1e-12;
        LossEstimate e;
        e.method = EstimateMethod::quadrature;
        e.value = adaptive_simpson(integrand, l2 / l1 + inset, 1.0 - inset, opt);
        return e;
    }

    double c4_factor(const ChannelRealization &channel, const SkewMatrix &skew)
    {
        require_two(channel, skew, "c4_factor");
        const double l1 = channel.spectrum[0], l2 = channel.spectrum[1];
        const double top_a = skew.eig_aat.front();
        const double m2 = effective_spectra(channel, skew).ahha[1];
        return (l2 * top_a - m2) / (l1 * top_a - m2);
    }

    LossEstimate delta1_sk_upper2(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits)
    {
        require_two(channel, skew, "delta1_sk_upper2");
        require_full_rank(skew.a);
        const double l1 = channel.spectrum[0], l2 = channel.spectrum[1];
        const double top_a = skew.eig_aat.front();
        const double m2 = effective_spectra(channel, skew).ahha[1];
        const double c4 = c4_factor(channel, skew);
        const double m = std::ldexp(1.0, int(bits));
        const double c4m = c4 > 0.0 ? std::exp(m * std::log(c4)) : 0.0;
        LossEstimate e;
        e.method = EstimateMethod::exact;
        e.value = (1.0 - m2 / (l1 * top_a) * (1.0 - c4m) - l2 / l1 * c4m) / (m + 1.0);
        e.note = "closed-form bound";
        return e;
    }

    double dsk_factor(const ChannelRealization &channel, const SkewMatrix &skew)
    {
        require_dims(channel, skew);
        const std::size_t n = channel.n_t();
        if (n < 3)
            throw PreconditionError("dsk_factor: needs N_t >= 3");
        require_full_rank(skew.a);
        const auto eff = effective_spectra(channel, skew);
        const double top = eff.ahha.front();
        const double floor_term = channel.spectrum.back() * skew.eig_ata.front();
        double prod = 1.0;
        for (std::size_t j = 1; j < n; ++j)
        {
            const double gap = top - eff.ahha[j];
            if (!(gap > 1e-12 * top))
                throw DegenerateSpectrumError("dsk_factor: repeated top eigenvalue of A^H H^H H A");
            prod *= (top - floor_term) / gap;
        }
        return 1.0 - prod;
    }

    LossEstimate delta1_sk_asympt(const ChannelRealization &channel, const SkewMatrix &skew, unsigned bits)
    {
        require_dims(channel, skew);
        const std::size_t n = channel.n_t();
        if (n == 3)
            throw UnsupportedError("delta1_sk_asympt: the N_t = 3 form has an unspecified constant");
        if (n < 3)
            throw PreconditionError("delta1_sk_asympt: needs N_t >= 4");
        const double l1 = channel.spectrum.front();
        if (!(l1 > 0.0))
            throw ZeroChannelError("delta1_sk_asympt: lambda_1 is zero");
        const double d_sk = dsk_factor(channel, skew);
        const double n1 = double(n - 1);
        const double kappa = std::exp(ln_gamma(1.0 / n1));
        const double top = effective_spectra(channel, skew).ahha.front();
        LossEstimate e;
        e.method = EstimateMethod::asymptotic;
        e.value = kappa * std::exp2(-double(bits) / n1) / n1 * (1.0 + d_sk / ((1.0 - d_sk) * n1)) *
                  (top / (skew.eig_ata.front() * l1) - channel.spectrum.back() / l1);
        return e;
    }

    LossEstimate avg_delta_snr_sk(const ChannelModel &model, const SkewMatrix &skew, unsigned bits,
                                  std::size_t n_channels, std::size_t n_codebooks, const RngStream &rng)
    {
        require_full_rank(skew.a);
        if (skew.a.rows() != model_n_t(model))
            throw PreconditionError("avg_delta_snr_sk: skew matrix does not match N_t");
        return channel_average(model, n_channels, n_codebooks, rng,
                               [&](const ChannelRealization &ch, RngStream &s)
                               {
                                   const double l1 = ch.spectrum.front();
                                   if (!(l1 > 0.0))
                                       throw ZeroChannelError("avg_delta_snr_sk: zero channel drawn");
                                   const double metric = best_skewed_metric(ch.gram, skew.a, bits, s);
                                   return std::max(0.0, 1.0 - metric / l1);
                               });
    }

    SkewDiagnostics skew_diagnostics(const ChannelRealization &channel, const SkewMatrix &skew, double alpha)
    {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw PreconditionError("skew_diagnostics: alpha must lie in [0, 1]");
        const auto eff = effective_spectra(channel, skew);
        const std::size_t n = channel.n_t();
        const double m_top = eff.ahha.front(), m_bot = eff.ahha.back();
        const double a_top = eff.ata.front();
        const double g_top = channel.spectrum.front(), g_bot = channel.spectrum.back();

        SkewDiagnostics d;
        d.m1 = (a_top * g_top > 0.0) ? 1.0 - m_top / (a_top * g_top) : nan;
        d.m2 = ratio_or_nan(m_top, m_bot);
        d.chi_ha = d.m2;
        d.chi_a = ratio_or_nan(eff.aat.front(), eff.aat.back());
        d.l1 = n >= 2 ? ratio_or_nan(eff.aat.front(), eff.ahha[1]) : nan;
        d.l2 = n >= 3 ? ratio_or_nan(m_top, eff.ahha[2]) : nan;
        d.l3 = ratio_or_nan(eff.aat.front(), m_top);
        const double lifted = m_top - g_bot * a_top;
        double prod = 1.0;
        for (std::size_t j = 1; j < n; ++j)
            prod *= m_top - eff.ahha[j];
        d.l4 = n >= 2 ? ratio_or_nan(prod, std::pow(lifted, double(n - 1))) : nan;
        d.l5 = ratio_or_nan(lifted, a_top);
        d.l6 = alpha * d.m1 + (1.0 - alpha) * d.m2;
        d.d_sk = nan;
        if (n >= 3)
        {
            try
            {
                d.d_sk = dsk_factor(channel, skew);
            }
            catch (const DegenerateSpectrumError &)
            {
            }
        }
        return d;
    }

    SkewMatrix build_skew_a2(const ComplexMatrix &sigma_t, double alpha, double beta)
    {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw PreconditionError("build_skew_a2: alpha must lie in [0, 1]");
        if (!(beta >= 0.0) || !std::isfinite(beta))
            throw PreconditionError("build_skew_a2: beta must be nonnegative");
        const HermitianEigen eig = hermitian_eig(sigma_t);
        const auto &lam = eig.values;
        if (!(lam.front() > 0.0) || !(lam.back() > 1e-12 * lam.front()))
            throw SingularCovarianceError("build_skew_a2: Sigma_t must be positive definite");
        std::vector<double> h(lam.size());
        for (std::size_t i = 0; i < lam.size(); ++i)
            h[i] = alpha * std::pow(lam[i], beta) + (1.0 - alpha) / std::sqrt(lam[i]);
        const ComplexMatrix a = eig.vectors * ComplexMatrix::diagonal(h) * eig.vectors.adjoint();
        return make_skew(a);
    }

    double skew_objective(const std::vector<ChannelRealization> &channels, const ComplexMatrix &a, double alpha)
    {
        if (channels.empty())
            throw PreconditionError("skew_objective: no channels");
        const EigenSpectrum ata = hermitian_eig(adjoint_times(a, a)).spectrum();
        double acc = 0.0;
        for (const auto &ch : channels)
        {
            const ComplexMatrix ha = ch.h * a;
            const EigenSpectrum m = hermitian_eig(adjoint_times(ha, ha)).spectrum();
            double term = 0.0;
            if (alpha > 0.0)
                term += alpha * (1.0 - m.front() / (ata.front() * ch.spectrum.front()));
            if (alpha < 1.0)
                term += (1.0 - alpha) * (m.back() > 0.0 ? m.front() / m.back() : inf);
            acc += term;
        }
        return acc / double(channels.size());
    }

    SkewOptimization optimize_skew_a1(const ChannelModel &model, double alpha, std::size_t n_channels,
                                      const RngStream &rng, std::size_t budget)
    {
        if (budget < 1)
            throw PreconditionError("optimize_skew_a1: budget must be at least 1");
        if (n_channels < 1)
            throw PreconditionError("optimize_skew_a1: need at least one channel draw");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw PreconditionError("optimize_skew_a1: alpha must lie in [0, 1]");
        validate_model(model);
        const std::size_t n = model_n_t(model);

        // common random numbers: every candidate sees these draws
        std::vector<ChannelRealization> channels(n_channels);
        const RngStream channel_rng = rng.child(0);
        parallel_for(n_channels, [&](std::size_t c)
                     {
                         RngStream s = channel_rng.child(c);
                         channels[c] = sample_channel(model, s); });

        ComplexMatrix mean_gram(n, n);
        for (const auto &ch : channels)
            mean_gram += ch.gram;
        mean_gram *= cplx(1.0 / double(n_channels));
        const HermitianEigen mean_eig = hermitian_eig(mean_gram);
        const double floor_val = 1e-12 * std::max(mean_eig.values.front(), 1e-300);

        const std::size_t n_angles = n * (n - 1);
        auto start_with = [&](double power)
        {
            std::vector<double> x(n_angles + n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                x[n_angles + i] = power * std::log(std::max(mean_eig.values[i], floor_val));
            return x;
        };

        constexpr std::size_t n_restarts = 8;
        std::vector<Restart> restarts;
        restarts.push_back({ComplexMatrix::identity(n), std::vector<double>(n_angles + n, 0.0)});
        restarts.push_back({mean_eig.vectors, start_with(0.5)});
        restarts.push_back({mean_eig.vectors, start_with(-0.5)});
        const RngStream restart_rng = rng.child(1);
        for (std::size_t r = restarts.size(); r < n_restarts; ++r)
        {
            RngStream s = restart_rng.child(r);
            restarts.push_back({sample_haar_unitary(n, s), std::vector<double>(n_angles + n, 0.0)});
        }

        std::vector<std::size_t> shares(n_restarts, budget / n_restarts);
        for (std::size_t r = 0; r < budget % n_restarts; ++r)
            ++shares[r];

        std::vector<SearchResult> results(n_restarts);
        parallel_for(n_restarts, [&](std::size_t r)
                     {
                         if (shares[r] == 0)
                             return;
                         const Restart &rs = restarts[r];
                         auto f = [&](const std::vector<double> &x)
                         { return skew_objective(channels, skew_from_params(rs.base, x, n), alpha); };
                         results[r] = nelder_mead(f, rs.start, shares[r], 0.3); });

        SkewOptimization out;
        std::size_t winner = 0;
        for (std::size_t r = 0; r < n_restarts; ++r)
        {
            out.evaluations += results[r].evaluations;
            if (results[r].f < results[winner].f)
                winner = r;
        }
        out.winning_restart = winner;
        out.objective = results[winner].f;
        out.identity_objective = skew_objective(channels, ComplexMatrix::identity(n), alpha);
        out.skew = make_skew(skew_from_params(restarts[winner].base, results[winner].x, n));
        return out;
    }

    ReverseCsResult reverse_cs_check(const std::vector<double> &samples, unsigned k, double x)
    {
        if (samples.empty())
            throw PreconditionError("reverse_cs_check: no samples");
        if (k == 0)
            throw PreconditionError("reverse_cs_check: k must be positive");
        double mk = 0.0, m2k = 0.0, above = 0.0;
        for (double s : samples)
        {
            if (!(s > 0.0))
                throw PreconditionError("reverse_cs_check: samples must be positive");
            const double p = std::pow(s, double(k));
            mk += p;
            m2k += p * p;
            if (s > x)
                above += 1.0;
        }
        const double n = double(samples.size());
        mk /= n;
        m2k /= n;
        const double xk = std::pow(x, double(k));
        if (!(xk <= mk))
            throw PreconditionError("reverse_cs_check: need x^k <= E[X^k]");
        ReverseCsResult r;
        r.bound = (mk - xk) * (mk - xk) / m2k;
        r.empirical = above / n;
        r.holds = r.empirical >= r.bound;
        return r;
    }
}
