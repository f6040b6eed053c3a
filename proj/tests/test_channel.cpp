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
#include "rvqlab/codebook.hpp"
#include "rvqlab/errors.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace rvqlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    ComplexMatrix mean_gram(const ChannelModel &model, std::size_t draws, std::uint64_t seed)
    {
        const auto n = model_n_t(model);
        ComplexMatrix acc(n, n);
        RngStream rng(seed, 0);
        for (std::size_t k = 0; k < draws; ++k)
            acc += sample_channel(model, rng).gram;
        acc *= 1.0 / static_cast<double>(draws);
        return acc;
    }
}

TEST_CASE("diagonal_channel - spectrum and dominant eigenvector")
{
    const auto ch = diagonal_channel(EigenSpectrum({3.0, 2.0, 1.0}));
    CHECK(ch.n_t() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK_THAT(ch.spectrum[i], WithinAbs(3.0 - i, 1e-14));
    CHECK_THAT(std::abs(ch.u_dominant[0]), WithinAbs(1.0, 1e-14));
    CHECK_THAT(ch.gram(1, 1).real(), WithinAbs(2.0, 1e-14));
}

TEST_CASE("make_realization - gram and spectrum of a rectangular channel")
{
    RngStream rng(4, 0);
    const auto h = sample_gaussian_matrix(2, 3, rng);
    const auto ch = make_realization(h);
    CHECK(ch.n_r() == 2);
    CHECK(ch.n_t() == 3);
    REQUIRE(ch.spectrum.size() == 3);
    CHECK_THAT(ch.spectrum.back(), WithinAbs(0.0, 1e-12)); // rank 2
    CHECK_THAT(ch.spectrum.sum(), WithinRel(std::pow(h.frobenius_norm(), 2), 1e-12));
    CHECK_THAT(quadratic_form(ch.gram, ch.u_dominant), WithinRel(ch.spectrum.front(), 1e-12));
}

TEST_CASE("IidModel - mean gram is N_r times identity")
{
    const ChannelModel model = IidModel{3, 2, 1.0};
    validate_model(model);
    CHECK(expected_power(model) == 6.0);
    const auto g = mean_gram(model, 20000, 1);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK_THAT(std::abs(g(i, j) - (i == j ? 2.0 : 0.0)), WithinAbs(0.0, 0.06));
}

TEST_CASE("KroneckerModel - covariances are reproduced")
{
    const auto st = ComplexMatrix::diagonal({4.0, 3.0, 2.0, 1.0}) * ComplexMatrix::identity(4);
    ComplexMatrix sr(2, 2, {6.0, cplx(1.0, 2.0), cplx(1.0, -2.0), 4.0});
    const auto km = kronecker_from_covariances(st, sr);
    const ChannelModel model = km;
    const auto cov = transmit_covariance(model);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(cov.sigma_t(i, j) - st(i, j)) < 1e-12);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(cov.sigma_r(i, j) - sr(i, j)) < 1e-12);
    // Monte Carlo check of E[H^H H]
    const auto g = mean_gram(model, 40000, 2);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK_THAT(g(i, i).real(), WithinAbs(st(i, i).real(), 0.1));
    CHECK_THAT(expected_power(model), WithinRel(10.0, 1e-12));
}

TEST_CASE("kronecker_from_covariances - unequal traces rejected")
{
    CHECK_THROWS_AS(kronecker_from_covariances(ComplexMatrix::identity(2), ComplexMatrix::identity(3)),
                    PreconditionError);
}

TEST_CASE("FixedSpectrumModel - every draw has the prescribed spectrum")
{
    const ChannelModel model = FixedSpectrumModel{EigenSpectrum({4.0, 3.0, 2.0, 1.0}), false};
    RngStream rng(3, 0);
    for (int k = 0; k < 20; ++k)
    {
        const auto ch = sample_channel(model, rng);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK_THAT(ch.spectrum[i], WithinAbs(4.0 - i, 1e-12));
    }
    const ChannelModel frozen = FixedSpectrumModel{EigenSpectrum({2.0, 1.0}), true};
    const auto ch = sample_channel(frozen, rng);
    CHECK_THAT(ch.gram(0, 0).real(), WithinAbs(2.0, 1e-14));
    CHECK_THROWS_AS(transmit_covariance(model), UnsupportedError);
}

TEST_CASE("normalize_power - scales expected power")
{
    const ChannelModel model = IidModel{4, 4, 1.0};
    CHECK_THAT(expected_power(normalize_power(model, 4.0)), WithinRel(4.0, 1e-14));
}

TEST_CASE("generate_rvq - size, norms and determinism")
{
    RngStream a(8, 0), b(8, 0);
    const auto cb = generate_rvq(3, 5, a);
    REQUIRE(cb.size() == 32);
    for (const auto &f : cb.vectors)
        CHECK_THAT(norm2(f), WithinAbs(1.0, 1e-13));
    CHECK(generate_rvq(3, 5, b).vectors == cb.vectors);
    RngStream c(8, 0);
    CHECK_THROWS_AS(generate_rvq(3, 25, c), ResourceLimitError);
}

TEST_CASE("select - argmax with lowest index on ties")
{
    const auto ch = diagonal_channel(EigenSpectrum({2.0, 1.0}));
    Codebook cb;
    cb.bits = 2;
    cb.vectors = {{0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
    const auto s = select(cb, ch, 3.0);
    CHECK(s.index == 1);
    CHECK_THAT(s.metric, WithinAbs(2.0, 1e-14));
    CHECK_THAT(s.snr_rx, WithinAbs(6.0, 1e-14));
    const auto mi = mutual_info_pair(ch, s, 3.0);
    CHECK_THAT(mi.i_perf, WithinAbs(std::log2(7.0), 1e-15));
    CHECK_THAT(mi.i_lim, WithinAbs(std::log2(7.0), 1e-15));
}

TEST_CASE("best_rvq_metric - streams the same codebook as generate_rvq")
{
    RngStream r0(12, 0);
    const auto ch = make_realization(sample_gaussian_matrix(3, 3, r0));
    RngStream a(12, 5), b(12, 5);
    const auto cb = generate_rvq(3, 6, a);
    CHECK(best_rvq_metric(ch.gram, 6, b) == select(cb, ch).metric);
    CHECK(a.position() == b.position());
}

TEST_CASE("skew_codebook - unit norm entries and skewed metric agreement")
{
    RngStream r0(13, 0);
    const auto ch = make_realization(sample_gaussian_matrix(2, 2, r0));
    const auto a = sample_gaussian_matrix(2, 2, r0);
    RngStream x(13, 1), y(13, 1);
    const auto cb = skew_codebook(generate_rvq(2, 4, x), a, "test");
    CHECK(cb.kind == CodebookKind::skewed);
    CHECK(cb.skew_id == "test");
    for (const auto &f : cb.vectors)
        CHECK_THAT(norm2(f), WithinAbs(1.0, 1e-13));
    CHECK_THAT(best_skewed_metric(ch.gram, a, 4, y), WithinRel(select(cb, ch).metric, 1e-13));
}

TEST_CASE("skew_codebook - singular skew rejected")
{
    RngStream r(1, 0);
    const auto cb = generate_rvq(2, 2, r);
    CHECK_THROWS_AS(skew_codebook(cb, ComplexMatrix::diagonal({1.0, 0.0})), SingularSkewError);
    CHECK_THROWS_AS(require_full_rank(ComplexMatrix::diagonal({1.0, 1e-13})), SingularSkewError);
    CHECK_NOTHROW(require_full_rank(ComplexMatrix::diagonal({1.0, 1e-6})));
}
