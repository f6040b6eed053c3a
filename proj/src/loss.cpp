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

#include "rvqlab/loss.hpp"
#include "rvqlab/codebook.hpp"
#include "rvqlab/errors.hpp"
#include "rvqlab/parallel.hpp"
#include "rvqlab/quadrature.hpp"
#include "rvqlab/wnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace rvqlab
{
    namespace
    {
        constexpr double ln2 = std::numbers::ln2;
        constexpr double gap_tol = 1e-9;
        constexpr double ninf = -std::numeric_limits<double>::infinity();

        // Running log-sum-exp: sum = exp(shift) * acc
        struct LogSum
        {
            double shift = ninf;
            double acc = 0.0;

            void add(double log_term)
            {
                if (log_term == ninf)
                    return;
                if (log_term > shift)
                {
                    acc = acc * std::exp(shift - log_term) + 1.0;
                    shift = log_term;
                }
                else
                    acc += std::exp(log_term - shift);
            }
            double log_value() const { return acc > 0.0 ? shift + std::log(acc) : ninf; }
        };

        double two_pow(unsigned bits) { return std::ldexp(1.0, int(bits)); }

        void require_top_gap(const EigenSpectrum &lambda, const char *who)
        {
            if (lambda.size() < 2)
                throw PreconditionError(std::string(who) + ": need at least two eigenvalues");
            if (!(lambda.front() > 0.0))
                throw ZeroChannelError(std::string(who) + ": lambda_1 is zero");
            if (lambda[0] - lambda[1] < gap_tol * lambda[0])
                throw DegenerateSpectrumError(std::string(who) + ": lambda_1 - lambda_2 below tolerance");
        }

        void require_closed_form_bits(unsigned bits, const char *who)
        {
            if (bits > max_closed_form_bits)
                throw UnsupportedError(std::string(who) + ": closed forms are limited to B <= 20");
        }

        void require_rho(double rho, const char *who)
        {
            if (!(rho > 0.0) || !std::isfinite(rho))
                throw PreconditionError(std::string(who) + ": rho must be positive");
        }

        // ln of sum_{k=0}^m c_k d^(m-k), summed from k = m downward
        double log_reduction_series(double m, double p, double d)
        {
            const double a = (p + 1.0) / 2.0;
            if (!(a > 0.0))
                throw DomainError("reduction_series: need p > -1");
            if (!(d >= 0.0 && d < 1.0))
                throw DomainError("reduction_series: need D in [0, 1)");
            // c_m = m! Gamma(a) / Gamma(m + a) = m B(m, a)
            const double lo = std::min(m, a), hi = std::max(m, a);
            double log_term = std::log(m) + ln_gamma(lo) - ln_gamma_ratio(hi, lo);
            if (d == 0.0)
                return log_term;
            LogSum sum;
            sum.add(log_term);
            // j = m - k counts steps taken downward
            for (double j = 0.0; j < m; j += 1.0)
            {
                const double ratio = d * (2.0 * j + p + 1.0) / (2.0 * (j + 1.0));
                log_term += std::log(ratio);
                sum.add(log_term);
                const double next = d * (2.0 * j + p + 3.0) / (2.0 * (j + 2.0));
                const double r = std::max(next, d);
                if (r < 1.0 && log_term + std::log(r / (1.0 - r)) < std::log(1e-17) + sum.log_value())
                    break;
            }
            return sum.log_value();
        }

        // (l1 - l2) / l1 etc. in one place
        struct TopSegment
        {
            double l1, l2, ln;
            double d;     // D
            double log_one_minus_d;
        };

        TopSegment top_segment(const EigenSpectrum &lambda)
        {
            TopSegment t{lambda.front(), lambda[1], lambda.back(), 0.0, 0.0};
            double log_prod = 0.0;
            for (std::size_t j = 2; j < lambda.size(); ++j)
                log_prod += std::log((t.l1 - t.l2) / (t.l1 - lambda[j]));
            t.log_one_minus_d = log_prod;
            t.d = -std::expm1(log_prod);
            return t;
        }

        std::vector<double> scaled_breakpoints(const EigenSpectrum &lambda)
        {
            std::vector<double> pts;
            for (std::size_t i = lambda.size(); i-- > 0;)
                pts.push_back(lambda[i] / lambda.front());
            pts.back() = 1.0;
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            return pts;
        }

        void require_quadrature_support(const EigenSpectrum &lambda, unsigned bits, const char *who)
        {
            if (lambda.size() < 2 || lambda.size() > 4)
                throw UnsupportedError(std::string(who) + ": needs 2 <= N_t <= 4");
            if (bits > max_codebook_bits)
                throw ResourceLimitError(std::string(who) + ": bits exceed the cap of 24");
            if (!(lambda.front() > 0.0))
                throw ZeroChannelError(std::string(who) + ": lambda_1 is zero");
        }

        // Integral of w(t) F(t)^m over [lambda_n/lambda_1, 1] for the scaled law
        double integrate_power(const EigenSpectrum &lambda, unsigned bits, const std::function<double(double)> &w,
                               double abs_tol)
        {
            const WeightedNormLaw law(lambda.scaled(1.0 / lambda.front()));
            const double m = two_pow(bits);
            auto f = [&](double t)
            {
                const double F = law.cdf(t);
                return F <= 0.0 ? 0.0 : w(t) * std::exp(m * std::log(F));
            };
            const auto pts = scaled_breakpoints(lambda);
            QuadratureOptions opt;
            opt.abs_tol = abs_tol;
            return integrate_piecewise(f, pts, opt);
        }

        template <class SampleFn>
        LossEstimate mc_over_codebooks(std::size_t n_codebooks, const RngStream &rng, SampleFn sample)
        {
            if (n_codebooks < 2)
                throw PreconditionError("Monte Carlo estimate needs at least two codebooks");
            std::vector<double> samples(n_codebooks);
            parallel_for(n_codebooks, [&](std::size_t k)
                         {
                             RngStream s = rng.child(k);
                             samples[k] = sample(s); });
            return mc_estimate(samples);
        }

        LossEstimate zero_mc()
        {
            LossEstimate e;
            e.method = EstimateMethod::monte_carlo;
            e.std_error = 0.0;
            return e;
        }

        double snr_loss_sample(const ChannelRealization &ch, unsigned bits, RngStream &s)
        {
            const double l1 = ch.spectrum.front();
            if (!(l1 > 0.0))
                throw ZeroChannelError("Delta_1 undefined for a zero channel");
            if (ch.spectrum.back() == l1)
                return 0.0;
            const double metric = best_rvq_metric(ch.gram, bits, s);
            return std::max(0.0, (l1 - metric) / l1);
        }

        double mi_loss_sample(const ChannelRealization &ch, unsigned bits, double rho, RngStream &s)
        {
            const double l1 = ch.spectrum.front();
            if (ch.spectrum.back() == l1)
                return 0.0;
            const double metric = best_rvq_metric(ch.gram, bits, s);
            return std::max(0.0, (std::log1p(rho * l1) - std::log1p(rho * metric)) / ln2);
        }

        std::optional<double> delta2_reference(const EigenSpectrum &lambda, double rho, unsigned bits, double value)
        {
            if (lambda.size() > 4 || bits > 16)
                return std::nullopt;
            try
            {
                const double q = delta2_quadrature(lambda, rho, bits).value;
                if (q > 0.0)
                    return value / q;
            }
            catch (const Error &)
            {
            }
            return std::nullopt;
        }
    }

    std::string to_string(EstimateMethod method)
    {
        switch (method)
        {
        case EstimateMethod::monte_carlo:
            return "monte-carlo";
        case EstimateMethod::exact:
            return "exact";
        case EstimateMethod::approx:
            return "approx";
        case EstimateMethod::asymptotic:
            return "asymptotic";
        case EstimateMethod::quadrature:
            return "quadrature";
        }
        return "unknown";
    }

    QuantizationFactors quantization_factors(const EigenSpectrum &lambda, unsigned bits)
    {
        require_top_gap(lambda, "quantization_factors");
        const double n1 = double(lambda.size() - 1);
        QuantizationFactors q;
        q.m = two_pow(bits);
        q.a_n = 1.0 / (q.m * n1 + 1.0);
        q.p = 2.0 / n1 - 1.0;
        q.d = top_segment(lambda).d;
        q.kappa = std::exp(ln_gamma(1.0 / n1));
        return q;
    }

    MiFactors2 mi_factors_2(const EigenSpectrum &lambda, double rho)
    {
        require_rho(rho, "mi_factors_2");
        if (lambda.size() != 2)
            throw PreconditionError("mi_factors_2: needs N_t = 2");
        MiFactors2 f;
        f.s = (1.0 + rho * lambda[1]) / rho;
        f.z = (lambda[0] - lambda[1]) / f.s;
        return f;
    }

    double reduction_series(double m, double p, double d)
    {
        if (!(m >= 1.0) || m != std::floor(m))
            throw DomainError("reduction_series: m must be a positive integer");
        return std::exp(log_reduction_series(m, p, d));
    }

    LossEstimate mc_estimate(std::span<const double> samples)
    {
        if (samples.size() < 2)
            throw PreconditionError("mc_estimate: need at least two samples");
        const double n = double(samples.size());
        double mean = 0.0;
        for (double x : samples)
            mean += x;
        mean /= n;
        double ss = 0.0;
        for (double x : samples)
            ss += (x - mean) * (x - mean);
        LossEstimate e;
        e.value = mean;
        e.method = EstimateMethod::monte_carlo;
        e.std_error = std::sqrt(ss / (n - 1.0) / n);
        return e;
    }

    LossEstimate delta1_mc(const ChannelRealization &channel, unsigned bits, std::size_t n_codebooks,
                           const RngStream &rng)
    {
        if (n_codebooks < 2)
            throw PreconditionError("delta1_mc: need at least two codebooks");
        const double l1 = channel.spectrum.front();
        if (!(l1 > 0.0))
            throw ZeroChannelError("delta1_mc: lambda_1 is zero");
        if (channel.spectrum.back() == l1)
            return zero_mc();
        return mc_over_codebooks(n_codebooks, rng, [&](RngStream &s)
                                 { return snr_loss_sample(channel, bits, s); });
    }

    LossEstimate delta1_quadrature(const EigenSpectrum &lambda, unsigned bits)
    {
        require_quadrature_support(lambda, bits, "delta1_quadrature");
        LossEstimate e;
        e.method = EstimateMethod::quadrature;
        if (lambda.back() == lambda.front())
            return e;
        e.value = integrate_power(lambda, bits, [](double)
                                  { return 1.0; },
                                  1e-13);
        return e;
    }

    LossEstimate delta1_exact(const EigenSpectrum &lambda, unsigned bits)
    {
        require_top_gap(lambda, "delta1_exact");
        require_closed_form_bits(bits, "delta1_exact");
        const double m = two_pow(bits);
        const double l1 = lambda[0], l2 = lambda[1];
        LossEstimate e;
        e.method = EstimateMethod::exact;
        if (lambda.size() == 2)
        {
            e.value = (1.0 - l2 / l1) / (m + 1.0);
            return e;
        }
        if (lambda.size() != 3)
            throw UnsupportedError("delta1_exact: closed form exists for N_t = 2 and 3 only");
        const double l3 = lambda[2];
        const double r = (l2 - l3) / (l1 - l3);
        const double r_m = r > 0.0 ? std::exp(m * std::log(r)) : 0.0;
        const double s = std::exp(log_reduction_series(m, 0.0, r));
        const double a3 = 1.0 / (2.0 * m + 1.0);
        e.value = a3 * ((1.0 - l3 / l1) * r_m + (1.0 - l2 / l1) * (s - r_m));
        return e;
    }

    LossEstimate delta1_appx(const EigenSpectrum &lambda, unsigned bits)
    {
        require_top_gap(lambda, "delta1_appx");
        require_closed_form_bits(bits, "delta1_appx");
        const auto q = quantization_factors(lambda, bits);
        LossEstimate e;
        e.method = EstimateMethod::approx;
        e.value = std::exp(std::log(q.a_n * (1.0 - lambda[1] / lambda[0])) + log_reduction_series(q.m, q.p, q.d));
        return e;
    }

    double log2_epsilon_b(const EigenSpectrum &lambda, unsigned bits)
    {
        const double appx = delta1_appx(lambda, bits).value;
        const double num = (lambda[1] - lambda.back()) / lambda[0];
        if (!(num > 0.0))
            return ninf;
        const auto q = quantization_factors(lambda, bits);
        return std::log2(num) + q.m * std::log2(q.d) - std::log2(appx);
    }

    double epsilon_b(const EigenSpectrum &lambda, unsigned bits) { return std::exp2(log2_epsilon_b(lambda, bits)); }

    LossEstimate delta1_asympt(const EigenSpectrum &lambda, unsigned bits)
    {
        require_top_gap(lambda, "delta1_asympt");
        const std::size_t n = lambda.size();
        if (n == 2)
            throw UnsupportedError("delta1_asympt: N_t = 2 is covered by delta1_exact");
        const double l1 = lambda[0], l2 = lambda[1];
        LossEstimate e;
        e.method = EstimateMethod::asymptotic;
        if (n == 3)
        {
            const double l3 = lambda[2];
            e.value = std::sqrt(std::numbers::pi) * std::exp2(-double(bits) / 2.0 - 1.0) * (1.0 - l2 / l1) *
                      (1.0 + (l2 - l3) / (2.0 * (l1 - l3)));
            return e;
        }
        const auto q = quantization_factors(lambda, bits);
        const double n1 = double(n - 1);
        e.value = q.kappa * std::exp2(-double(bits) / n1) / n1 * (1.0 - l2 / l1) * (1.0 + q.d / ((1.0 - q.d) * n1));
        return e;
    }

    LossEstimate delta1_miso(std::size_t n_t, unsigned bits)
    {
        if (n_t < 2)
            throw PreconditionError("delta1_miso: needs N_t >= 2");
        const double m = two_pow(bits);
        const double y = double(n_t) / double(n_t - 1);
        const double lo = std::min(m, y), hi = std::max(m, y);
        LossEstimate e;
        e.method = EstimateMethod::exact;
        e.value = std::exp(std::log(m) + ln_gamma(lo) - ln_gamma_ratio(hi, lo));
        return e;
    }

    LossEstimate delta2_mc(const ChannelRealization &channel, unsigned bits, double rho, std::size_t n_codebooks,
                           const RngStream &rng)
    {
        require_rho(rho, "delta2_mc");
        if (n_codebooks < 2)
            throw PreconditionError("delta2_mc: need at least two codebooks");
        if (channel.spectrum.back() == channel.spectrum.front())
            return zero_mc();
        return mc_over_codebooks(n_codebooks, rng, [&](RngStream &s)
                                 { return mi_loss_sample(channel, bits, rho, s); });
    }

    LossEstimate delta2_quadrature(const EigenSpectrum &lambda, double rho, unsigned bits)
    {
        require_rho(rho, "delta2_quadrature");
        require_quadrature_support(lambda, bits, "delta2_quadrature");
        LossEstimate e;
        e.method = EstimateMethod::quadrature;
        if (lambda.back() == lambda.front())
            return e;
        const double c = rho * lambda.front();
        const double scale = c / ln2;
        e.value = scale * integrate_power(lambda, bits, [c](double t)
                                          { return 1.0 / (1.0 + c * t); },
                                          1e-12 / std::max(1.0, scale));
        return e;
    }

    LossEstimate delta2_exact2(const EigenSpectrum &lambda, double rho, unsigned bits)
    {
        require_rho(rho, "delta2_exact2");
        if (lambda.size() != 2)
            throw PreconditionError("delta2_exact2: needs N_t = 2");
        require_top_gap(lambda, "delta2_exact2");
        require_closed_form_bits(bits, "delta2_exact2");
        const double z = mi_factors_2(lambda, rho).z;
        const std::size_t m = std::size_t(1) << bits;
        // delta = integral_0^1 t^m / (t + 1/z) dt
        double delta = 0.0;
        if (z >= 1.0)
        {
            const double w = 1.0 / z;
            double i_k = std::log1p(z);
            for (std::size_t k = 1; k <= m; ++k)
                i_k = 1.0 / double(k) - w * i_k;
            delta = i_k;
        }
        else
        {
            double zj = 1.0;
            for (std::size_t j = 1;; ++j)
            {
                zj *= z;
                const double term = zj / double(m + j);
                delta += (j % 2 == 1) ? term : -term;
                if (term <= 1e-17 * std::abs(delta) || zj == 0.0)
                    break;
            }
        }
        LossEstimate e;
        e.method = EstimateMethod::exact;
        e.value = delta / ln2;
        return e;
    }

    LossEstimate delta2_appx(const EigenSpectrum &lambda, double rho, unsigned bits)
    {
        require_rho(rho, "delta2_appx");
        if (lambda.size() < 3)
            throw PreconditionError("delta2_appx: needs N_t >= 3");
        require_top_gap(lambda, "delta2_appx");
        require_closed_form_bits(bits, "delta2_appx");
        const auto ts = top_segment(lambda);
        const double n1 = double(lambda.size() - 1);
        const double m = two_pow(bits);
        // gamma^i (1-D)^{(i+1)/(N-1)} times the prefactor collapses to q^(i+1) / (N-1)
        const double q = rho * (ts.l1 - ts.l2) / (1.0 + rho * ts.l1);
        const double log_q = std::log(q);
        LogSum sum;
        bool certified = false;
        for (int i = 0; i < 10000; ++i)
        {
            const double a_i = double(i + 1) / n1;
            const double p_i = 2.0 * a_i - 1.0;
            const double log_t = double(i) * log_q + log_reduction_series(m, p_i, ts.d) - std::log(m + a_i);
            sum.add(log_t);
            // term ratio is at most q, so the tail is below t q / (1 - q)
            if (log_t + log_q - std::log1p(-q) < std::log(1e-14) + sum.log_value())
            {
                certified = true;
                break;
            }
        }
        LossEstimate e;
        e.method = EstimateMethod::approx;
        e.value = std::exp(log_q - std::log(n1) + sum.log_value()) / ln2;
        if (!certified)
            e.note = "outer series stopped at the 10000-term cap";
        return e;
    }

    LossEstimate delta2_method2(const EigenSpectrum &lambda, double rho, unsigned bits)
    {
        require_rho(rho, "delta2_method2");
        if (lambda.size() < 3)
            throw PreconditionError("delta2_method2: needs N_t >= 3");
        if (bits > 3)
            throw InstabilityGuardError("delta2_method2: alternating expansion is unstable beyond B = 3");
        require_top_gap(lambda, "delta2_method2");
        const auto ts = top_segment(lambda);
        const double n1 = double(lambda.size() - 1);
        double prod = 1.0;
        for (std::size_t j = 1; j < lambda.size(); ++j)
            prod *= ts.l1 - lambda[j];
        const double a = std::pow(prod, 1.0 / n1);
        const double y = (ts.l1 - ts.l2) / a;
        const double q = rho * (ts.l1 - ts.l2) / (1.0 + rho * ts.l1);
        const int m = 1 << bits;
        double binom = 1.0, acc = 0.0;
        for (int k = 0; k <= m; ++k)
        {
            if (k > 0)
                binom *= double(m - k + 1) / double(k);
            const double b = n1 * k + 1.0;
            const double term = binom * std::pow(y, b) / b * gauss_2f1(1.0, b, b + 1.0, q);
            acc += (k % 2 == 0) ? term : -term;
        }
        LossEstimate e;
        e.method = EstimateMethod::approx;
        e.value = rho * a / (1.0 + rho * ts.l1) * acc / ln2;
        return e;
    }

    double log2_epsilon_b_prime(const EigenSpectrum &lambda, double rho, unsigned bits)
    {
        const double appx = delta2_appx(lambda, rho, bits).value;
        const double ln = lambda.back();
        const double num = rho * (lambda[1] - ln) / ((1.0 + rho * ln) * ln2);
        if (!(num > 0.0))
            return ninf;
        const double d = top_segment(lambda).d;
        return std::log2(num) + two_pow(bits) * std::log2(d) - std::log2(appx);
    }

    double epsilon_b_prime(const EigenSpectrum &lambda, double rho, unsigned bits)
    {
        return std::exp2(log2_epsilon_b_prime(lambda, rho, bits));
    }

    LossEstimate delta2_asympt(const EigenSpectrum &lambda, double rho, unsigned bits, AsymptoticForm form)
    {
        require_rho(rho, "delta2_asympt");
        require_top_gap(lambda, "delta2_asympt");
        const std::size_t n = lambda.size();
        const double n1 = double(n - 1);
        const double l1 = lambda[0], l2 = lambda[1];
        const double m = two_pow(bits);
        LossEstimate e;
        e.method = EstimateMethod::asymptotic;
        if (form == AsymptoticForm::prop3 && n == 2)
        {
            const double z = mi_factors_2(lambda, rho).z;
            if (z < 1.0)
                e.value = z / (ln2 * (m + 1.0));
            else
            {
                if (m == 1.0)
                    throw DomainError("delta2_asympt: the z >= 1 branch needs B >= 1");
                const double u = z - 1.0;
                const double ratio = (u == 0.0) ? 1.0 : u / std::log1p(u); // (z - 1) / ln z
                e.value = ratio / (ln2 * 2.0 * z * (m - 1.0));
            }
        }
        else
        {
            const double kappa = std::exp(ln_gamma(1.0 / n1));
            const double d = top_segment(lambda).d;
            const double lead = std::exp2(-double(bits) / n1) / (ln2 * n1) * rho * (l1 - l2);
            if (form == AsymptoticForm::prop3)
                e.value = lead / (1.0 + rho * l1) * (kappa + d / (1.0 - d));
            else
                e.value = lead * kappa * (1.0 + d / ((1.0 - d) * n1));
        }
        e.reference_ratio = delta2_reference(lambda, rho, bits, e.value);
        return e;
    }

    LossEstimate channel_average(const ChannelModel &model, std::size_t n_channels, std::size_t n_codebooks,
                                 const RngStream &rng, const ChannelLossSample &sample)
    {
        if (n_channels < 2 || n_codebooks < 2)
            throw PreconditionError("channel average needs at least two channels and two codebooks");
        validate_model(model);
        std::vector<ChannelRealization> channels(n_channels);
        parallel_for(n_channels, [&](std::size_t c)
                     {
                         RngStream s = rng.child(c);
                         channels[c] = sample_channel(model, s); });
        std::vector<double> samples(n_channels * n_codebooks);
        parallel_for(samples.size(), [&](std::size_t i)
                     {
                         const std::size_t c = i / n_codebooks, k = i % n_codebooks;
                         RngStream s = rng.child(c).child(k);
                         samples[i] = sample(channels[c], s); });
        std::vector<double> means(n_channels, 0.0);
        for (std::size_t c = 0; c < n_channels; ++c)
        {
            double acc = 0.0;
            for (std::size_t k = 0; k < n_codebooks; ++k)
                acc += samples[c * n_codebooks + k];
            means[c] = acc / double(n_codebooks);
        }
        return mc_estimate(means);
    }

    LossEstimate avg_delta_snr(const ChannelModel &model, unsigned bits, std::size_t n_channels,
                               std::size_t n_codebooks, const RngStream &rng)
    {
        return channel_average(model, n_channels, n_codebooks, rng,
                               [bits](const ChannelRealization &ch, RngStream &s)
                               { return snr_loss_sample(ch, bits, s); });
    }

    LossEstimate avg_delta_mi(const ChannelModel &model, unsigned bits, double rho, std::size_t n_channels,
                              std::size_t n_codebooks, const RngStream &rng)
    {
        require_rho(rho, "avg_delta_mi");
        return channel_average(model, n_channels, n_codebooks, rng,
                               [bits, rho](const ChannelRealization &ch, RngStream &s)
                               { return mi_loss_sample(ch, bits, rho, s); });
    }

    HardeningApprox hardening_approx(const ComplexMatrix &sigma_t)
    {
        const EigenSpectrum lambda = hermitian_eig(sigma_t).spectrum();
        if (lambda.size() < 2)
            throw PreconditionError("hardening_approx: needs N_t >= 2");
        if (!(lambda[0] > 0.0) || lambda[0] - lambda[1] < gap_tol * lambda[0])
            throw DegenerateSpectrumError("hardening_approx: lambda_1(Sigma_t) = lambda_2(Sigma_t)");
        HardeningApprox h;
        const double gap = lambda[0] - lambda[1];
        h.d1 = gap / lambda[0];
        double prod = 1.0;
        for (std::size_t j = 2; j < lambda.size(); ++j)
            prod *= (lambda[0] - lambda[j]) / gap;
        h.d2 = 1.0 + prod;
        h.product = h.d1 * h.d2;
        return h;
    }
}
