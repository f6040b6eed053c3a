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

#include "rvqlab/errors.hpp"
#include "rvqlab/numerics.hpp"
#include "rvqlab/parallel.hpp"
#include "rvqlab/quadrature.hpp"
#include "rvqlab/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

using namespace rvqlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    ComplexMatrix random_hermitian(std::size_t n, RngStream &rng)
    {
        const auto g = sample_gaussian_matrix(n, n, rng);
        return g + g.adjoint();
    }

    double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b)
    {
        double d = 0.0;
        for (std::size_t i = 0; i < a.entries().size(); ++i)
            d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
        return d;
    }
}

TEST_CASE("ln_gamma - matches std::lgamma in relative terms")
{
    for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 171.5, 1e3, 1e6, 1e9})
        CHECK_THAT(ln_gamma(x), WithinRel(std::lgamma(x), 1e-13) || WithinAbs(std::lgamma(x), 1e-14));
}

TEST_CASE("ln_gamma - rejects nonpositive arguments")
{
    CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(ln_gamma(-2.5), DomainError);
}

TEST_CASE("ln_gamma_ratio - agrees with difference of lgamma where that is well conditioned")
{
    for (double x : {0.5, 2.0, 17.0, 300.0})
        for (double d : {0.25, 1.0, 1.0 / 3.0, 4.0})
            CHECK_THAT(ln_gamma_ratio(x, d), WithinAbs(std::lgamma(x + d) - std::lgamma(x), 1e-12));
}

TEST_CASE("ln_gamma_ratio - large argument follows d log x")
{
    // Gamma(x + d) / Gamma(x) ~ x^d (1 + d(d-1)/(2x))
    const double x = 1e12, d = 0.5;
    CHECK_THAT(ln_gamma_ratio(x, d), WithinAbs(d * std::log(x) + d * (d - 1) / (2 * x), 1e-12));
}

TEST_CASE("beta_fn - closed forms")
{
    CHECK_THAT(beta_fn(1.0, 1.0), WithinRel(1.0, 1e-14));
    CHECK_THAT(beta_fn(2.0, 3.0), WithinRel(1.0 / 12.0, 1e-14));
    CHECK_THAT(beta_fn(0.5, 0.5), WithinRel(std::numbers::pi, 1e-14));
    CHECK_THAT(beta_fn(4096.0, 1.5), WithinRel(std::exp(std::lgamma(4096.0) + std::lgamma(1.5) - std::lgamma(4097.5)),
                                               1e-11));
}

TEST_CASE("gauss_2f1 - closed forms")
{
    for (double z : {0.0, 0.1, 0.5, 0.9, 0.99})
    {
        const double log_form = z == 0.0 ? 1.0 : -std::log1p(-z) / z;
        CHECK_THAT(gauss_2f1(1.0, 1.0, 2.0, z), WithinRel(log_form, 1e-12));
        CHECK_THAT(gauss_2f1(0.5, 1.0, 1.0, z), WithinRel(1.0 / std::sqrt(1.0 - z), 1e-12));
    }
    // terminating series for a negative integer
    CHECK_THAT(gauss_2f1(-2.0, 3.0, 4.0, 0.5), WithinRel(1.0 - 6.0 * 0.5 / 4 + 2.0 * 12.0 * 0.25 / (4 * 5 * 2), 1e-14));
}

TEST_CASE("gauss_2f1 - outside the unit interval is refused")
{
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, -0.1), DomainError);
}

TEST_CASE("EigenSpectrum - sorts, clamps, rejects")
{
    EigenSpectrum s({1.0, 3.0, -1e-14, 2.0});
    REQUIRE(s.size() == 4);
    CHECK(s.front() == 3.0);
    CHECK(s.back() == 0.0);
    CHECK(s.sum() == 6.0);
    CHECK(s.scaled(2.0)[1] == 4.0);
    CHECK_THROWS_AS(EigenSpectrum({1.0, -0.5}), DomainError);
}

TEST_CASE("hermitian_eig - reconstructs random Hermitian matrices")
{
    RngStream rng(11, 0);
    for (std::size_t n : {1u, 2u, 3u, 4u, 7u})
    {
        const auto m = random_hermitian(n, rng);
        const auto e = hermitian_eig(m);
        REQUIRE(e.values.size() == n);
        for (std::size_t i = 1; i < n; ++i)
            CHECK(e.values[i - 1] >= e.values[i]);
        ComplexMatrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            d(i, i) = e.values[i];
        const auto rebuilt = e.vectors * d * e.vectors.adjoint();
        CHECK(max_abs_diff(rebuilt, m) < 1e-12 * (1.0 + m.frobenius_norm()));
        CHECK(max_abs_diff(adjoint_times(e.vectors, e.vectors), ComplexMatrix::identity(n)) < 1e-13);
        double trace = 0.0;
        for (double v : e.values)
            trace += v;
        CHECK_THAT(trace, WithinAbs(m.trace_real(), 1e-12));
    }
}

TEST_CASE("hermitian_eig - rejects non-Hermitian input")
{
    ComplexMatrix m(2, 2, {1.0, 2.0, 0.0, 1.0});
    CHECK_THROWS_AS(hermitian_eig(m), PreconditionError);
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), PreconditionError);
}

TEST_CASE("ComplexMatrix - products and quadratic forms")
{
    ComplexMatrix a(2, 2, {cplx(1, 1), 2.0, 0.0, cplx(0, -1)});
    const auto ah_a = adjoint_times(a, a);
    CHECK(max_abs_diff(ah_a, a.adjoint() * a) < 1e-15);
    const CVector v{cplx(1, 0), cplx(0, 1)};
    // v^H (A^H A) v = |A v|^2; norm2 is the Euclidean norm
    CHECK_THAT(quadratic_form(ah_a, v), WithinAbs(std::pow(norm2(a.apply(v)), 2), 1e-13));
    CHECK_THAT(std::abs(inner(v, v)), WithinAbs(2.0, 1e-15));
}

TEST_CASE("adaptive_simpson - polynomial, smooth and kinked integrands")
{
    CHECK_THAT(adaptive_simpson([](double x) { return x * x * x; }, 0.0, 2.0), WithinAbs(4.0, 1e-12));
    CHECK_THAT(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, {1e-13}),
               WithinAbs(2.0, 1e-12));
    const std::vector<double> pts{-1.0, 0.0, 2.0};
    CHECK_THAT(integrate_piecewise([](double x) { return std::abs(x); }, pts, {1e-13}), WithinAbs(2.5, 1e-12));
}

TEST_CASE("adaptive_simpson - budget overrun is reported")
{
    QuadratureOptions opt{1e-15, 10};
    CHECK_THROWS_AS(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, opt), ResourceLimitError);
}

TEST_CASE("RngStream - deterministic and independent streams")
{
    RngStream a(5, 1), b(5, 1), c(5, 2), d(6, 1);
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
    // child does not advance the parent
    RngStream p(5, 1);
    (void)p.child(3);
    CHECK(p.position() == 0);
    CHECK(p.child(3).next_u64() == RngStream(5, 1).child(3).next_u64());
}

TEST_CASE("RngStream - uniform moments")
{
    RngStream r(1, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK_THAT(s / n, WithinAbs(0.5, 5 * std::sqrt(1.0 / 12 / n)));
    CHECK_THAT(s2 / n, WithinAbs(1.0 / 3.0, 0.003));
}

TEST_CASE("sample_isotropic - unit norm and uniform coordinate power")
{
    RngStream r(2, 0);
    const std::size_t n = 4, draws = 40000;
    std::vector<double> power(n, 0.0);
    for (std::size_t k = 0; k < draws; ++k)
    {
        const auto f = sample_isotropic(n, r);
        REQUIRE_THAT(norm2(f), WithinAbs(1.0, 1e-13));
        for (std::size_t i = 0; i < n; ++i)
            power[i] += std::norm(f[i]);
    }
    // |f_i|^2 ~ Beta(1, n-1): variance (n-1)/(n^2 (n+1))
    const double sd = std::sqrt((n - 1.0) / (n * n * (n + 1.0)) / draws);
    for (double p : power)
        CHECK_THAT(p / draws, WithinAbs(0.25, 5 * sd));
}

TEST_CASE("sample_haar_unitary - unitary with vanishing mean trace")
{
    RngStream r(3, 0);
    double tr_sq = 0.0;
    const int draws = 4000;
    for (int k = 0; k < draws; ++k)
    {
        const auto u = sample_haar_unitary(3, r);
        REQUIRE(max_abs_diff(adjoint_times(u, u), ComplexMatrix::identity(3)) < 1e-13);
        cplx t = 0.0;
        for (int i = 0; i < 3; ++i)
            t += u(i, i);
        tr_sq += std::norm(t);
    }
    // E|tr U|^2 = 1 for Haar measure
    CHECK_THAT(tr_sq / draws, WithinAbs(1.0, 0.1));
}

TEST_CASE("parallel_for - every index once regardless of worker count")
{
    for (unsigned w : {1u, 3u, 8u})
    {
        set_worker_count(w);
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::set<int>(hits.begin(), hits.end()) == std::set<int>{1});
    }
    set_worker_count(1);
}

TEST_CASE("parallel_for - lowest failing index is rethrown")
{
    set_worker_count(4);
    try
    {
        parallel_for(100, [](std::size_t i) {
            if (i == 17 || i == 80)
                throw DomainError("index " + std::to_string(i));
        });
        FAIL("no exception");
    }
    catch (const DomainError &e)
    {
        CHECK(std::string(e.what()) == "index 17");
    }
    set_worker_count(1);
}
