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

// Acceptance suite: one PASS/FAIL line per criterion. With --criterion N only that one runs.
// Exit status is nonzero when any criterion that ran failed.

#include "rvqlab/channel.hpp"
#include "rvqlab/harness.hpp"
#include "rvqlab/loss.hpp"
#include "rvqlab/ordering.hpp"
#include "rvqlab/parallel.hpp"
#include "rvqlab/skew.hpp"
#include "rvqlab/wnorm.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace rvqlab;

namespace
{
    constexpr std::uint64_t seed = 20240501;

    struct Outcome
    {
        bool pass = true;
        std::string detail;
    };

    std::string fmt(const char *f, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, f, args...);
        return buf;
    }

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    // sup |F(x) - F_n(x)| over the sorted samples lying in [lo, hi], checking both sides of each jump
    double sup_gap(const std::vector<double> &sorted, const WeightedNormLaw &law, double lo, double hi)
    {
        const double n = static_cast<double>(sorted.size());
        double d = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            const double x = sorted[i];
            if (x < lo || x > hi)
                continue;
            const double f = law.cdf(x);
            d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
        }
        return d;
    }

    Outcome criterion_1()
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        struct Case
        {
            std::vector<double> l;
            double lo, hi;
        };
        const std::vector<Case> cases{{{2, 1}, 1, 2}, {{3, 2, 1}, 1, 3}, {{4, 3, 2, 1}, 3, 4}};
        for (std::size_t k = 0; k < cases.size(); ++k)
        {
            const WeightedNormLaw law{EigenSpectrum(cases[k].l)};
            const auto s = empirical_cdf(law, 100000, RngStream(seed, 100 + k));
            const double gap = sup_gap(s, law, cases[k].lo, cases[k].hi);
            o.pass &= gap <= 0.01;
            o.detail += fmt("N=%zu sup=%.4f; ", cases[k].l.size(), gap);
        }
        const double t = seconds_since(t0);
        o.pass &= t < 10.0;
        o.detail += fmt("%.2f s", t);
        return o;
    }

    Outcome criterion_2()
    {
        const WeightedNormLaw law{EigenSpectrum({2.0, 1.0})};
        const auto s = empirical_cdf(law, 100000, RngStream(seed, 200));
        const double n = static_cast<double>(s.size());
        double ks = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            const double u = s[i] - 1.0; // uniform on [1, 2]
            ks = std::max({ks, (i + 1) / n - u, u - i / n});
        }
        const double crit = 1.63 / std::sqrt(n);
        return {ks <= crit, fmt("KS=%.5f critical=%.5f", ks, crit)};
    }

    Outcome criterion_3()
    {
        Outcome o;
        double worst = 0.0;
        for (const EigenSpectrum &l : {EigenSpectrum({2, 1}), EigenSpectrum({3, 2, 1})})
            for (unsigned b = 0; b <= 12; ++b)
                worst = std::max(worst, std::abs(delta1_exact(l, b).value - delta1_quadrature(l, b).value));
        const double lm1 = delta1_exact(EigenSpectrum({2, 1}), 1).value;
        const double lm2 = delta1_exact(EigenSpectrum({3, 2, 1}), 0).value;
        // exact up to rounding of the final operations
        o.pass = worst <= 1e-10 && std::abs(lm1 - 1.0 / 6.0) <= 4e-16 && std::abs(lm2 - 1.0 / 3.0) <= 4e-16;
        o.detail = fmt("max|exact-quad|=%.2e; landmarks %.17g %.17g", worst, lm1, lm2);
        return o;
    }

    Outcome criterion_4()
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        const EigenSpectrum l({4, 3, 2, 1});
        int bad = 0;
        for (unsigned b = 1; b <= 12; ++b)
        {
            const double appx = delta1_appx(l, b).value, quad = delta1_quadrature(l, b).value;
            const double eps = epsilon_b(l, b);
            const bool lower = appx <= quad + 1e-10;
            const bool upper = eps < 1.0 && quad <= appx / (1.0 - eps) + 1e-10;
            if (!lower || !upper)
            {
                ++bad;
                o.detail += fmt("B=%u appx=%.6g quad=%.6g eps=%.3g; ", b, appx, quad, eps);
            }
        }
        const double t = seconds_since(t0);
        o.pass = bad == 0 && t < 5.0;
        o.detail += fmt("%d violations, %.2f s", bad, t);
        return o;
    }

    Outcome criterion_5()
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        int bad = 0;
        double worst_z = 0.0;
        for (const EigenSpectrum &l : {EigenSpectrum({2, 1}), EigenSpectrum({3, 2, 1}), EigenSpectrum({4, 3, 2, 1})})
        {
            const auto ch = diagonal_channel(l);
            for (unsigned b = 1; b <= 8; ++b)
            {
                const auto mc = delta1_mc(ch, b, 1000, RngStream(seed, 500 + 10 * l.size() + b));
                const double ref = l.size() <= 3 ? delta1_exact(l, b).value : delta1_appx(l, b).value;
                const double z = std::abs(mc.value - ref) / *mc.std_error;
                worst_z = std::max(worst_z, z);
                if (z > 4.0)
                {
                    ++bad;
                    const double quad = delta1_quadrature(l, b).value;
                    o.detail += fmt("N=%zu B=%u mc=%.5f ref=%.5f z=%.1f (z vs quadrature %.1f); ", l.size(), b,
                                    mc.value, ref, z, std::abs(mc.value - quad) / *mc.std_error);
                }
            }
        }
        const double t = seconds_since(t0);
        o.pass = bad == 0 && t < 120.0;
        o.detail += fmt("%d of 24 outside 4 stderr, worst z=%.2f, %.2f s", bad, worst_z, t);
        return o;
    }

    Outcome criterion_6()
    {
        Outcome o;
        for (const EigenSpectrum &l : {EigenSpectrum({3, 2, 1}), EigenSpectrum({4, 3, 2, 1})})
        {
            // least squares of log2 appx against B on 8..16
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const int n = 9;
            for (unsigned b = 8; b <= 16; ++b)
            {
                const double y = std::log2(delta1_appx(l, b).value);
                sx += b;
                sy += y;
                sxx += double(b) * b;
                sxy += b * y;
            }
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            const double target = -1.0 / (double(l.size()) - 1.0);
            const bool ok = std::abs(slope / target - 1.0) <= 0.05;
            o.pass &= ok;
            o.detail += fmt("N=%zu slope=%.4f target=%.4f; ", l.size(), slope, target);
        }
        const EigenSpectrum l4({4, 3, 2, 1});
        const double ratio = delta1_appx(l4, 12).value / delta1_asympt(l4, 12).value;
        o.pass &= ratio >= 0.9 && ratio <= 1.1;
        o.detail += fmt("appx/asympt at B=12 = %.5f (required [0.9, 1.1])", ratio);
        return o;
    }

    Outcome criterion_7()
    {
        Outcome o;
        const auto fam = schur_family(0.01, 0.75, 0.005);
        const Delta1Evaluator quad = [](const EigenSpectrum &s, unsigned b) { return delta1_quadrature(s, b); };
        std::size_t chain_violations = 0;
        for (unsigned b : {2u, 4u, 6u})
            chain_violations += verify_schur(fam, b, quad).violations.size();

        RngStream rng(seed, 700);
        auto simplex = [&]
        {
            std::vector<double> v(4);
            double s = 0;
            for (auto &x : v)
                s += (x = -std::log(rng.uniform()));
            for (auto &x : v)
                x /= s;
            return EigenSpectrum(v);
        };
        std::size_t pairs = 0, tried = 0, pair_violations = 0;
        while (pairs < 200 && tried < 100000)
        {
            ++tried;
            const auto a = simplex(), b = simplex();
            const auto out = majorize_compare(a, b);
            if (out != MajorizationOutcome::lhs_majorized_by_rhs && out != MajorizationOutcome::rhs_majorized_by_lhs)
                continue;
            ++pairs;
            const auto &flat = out == MajorizationOutcome::lhs_majorized_by_rhs ? a : b;
            const auto &peaked = out == MajorizationOutcome::lhs_majorized_by_rhs ? b : a;
            if (delta1_quadrature(flat, 4).value > delta1_quadrature(peaked, 4).value + 1e-10)
                ++pair_violations;
        }
        o.pass = fam.size() == 149 && chain_violations == 0 && pairs == 200 && pair_violations == 0;
        o.detail = fmt("chain of %zu: %zu violations over B=2,4,6; %zu random pairs: %zu violations", fam.size(),
                       chain_violations, pairs, pair_violations);
        return o;
    }

    Outcome criterion_8()
    {
        const EigenSpectrum l({2, 1});
        double worst = 0.0;
        for (double rho : {0.1, 1.0, 10.0})
            for (unsigned b = 0; b <= 8; ++b)
                worst = std::max(worst, std::abs(delta2_exact2(l, rho, b).value - delta2_quadrature(l, rho, b).value));
        const double lm = delta2_exact2(l, 1.0, 1).value;
        const double target = (-1.5 + 4.0 * std::log(1.5)) / std::log(2.0);
        return {worst <= 1e-9 && std::abs(lm - target) <= 1e-9,
                fmt("max|exact2-quad|=%.2e; landmark %.12f vs %.12f", worst, lm, target)};
    }

    Outcome criterion_9()
    {
        Outcome o;
        int bad = 0, checked = 0;
        for (const EigenSpectrum &l : {EigenSpectrum({3, 2, 1}), EigenSpectrum({4, 3, 2, 1})})
            for (double rho : {0.1, 1.0, 10.0})
                for (unsigned b = 1; b <= 8; ++b)
                {
                    ++checked;
                    const double appx = delta2_appx(l, rho, b).value, quad = delta2_quadrature(l, rho, b).value;
                    const double eps = epsilon_b_prime(l, rho, b);
                    const bool ok = appx <= quad + 1e-9 && eps < 1.0 && quad <= appx / (1.0 - eps) + 1e-9;
                    if (!ok)
                    {
                        ++bad;
                        o.detail += fmt("N=%zu rho=%g B=%u appx=%.6g quad=%.6g eps'=%.3g; ", l.size(), rho, b, appx,
                                        quad, eps);
                    }
                }
        o.pass = bad == 0;
        o.detail += fmt("%d of %d violate", bad, checked);
        return o;
    }

    Outcome criterion_10()
    {
        Outcome o;
        const unsigned bits = 3;
        RngStream rng(seed, 1000);
        int upper_bad = 0, mc_bad = 0, id_bad = 0;
        double worst_ratio = 0.0, worst_z = 0.0, worst_id = 0.0;
        const auto identity = make_skew(ComplexMatrix::identity(2));
        for (int k = 0; k < 100; ++k)
        {
            const auto ch = make_realization(sample_gaussian_matrix(2, 2, rng));
            const auto skew = make_skew(sample_gaussian_matrix(2, 2, rng));
            const double exact = delta1_sk_exact2(ch, skew, bits).value;
            const double upper = delta1_sk_upper2(ch, skew, bits).value;
            if (exact > upper)
            {
                ++upper_bad;
                worst_ratio = std::max(worst_ratio, exact / upper);
            }
            const auto mc = delta1_sk_mc(ch, skew, bits, 10000, RngStream(seed, 1001).child(k));
            const double z = std::abs(mc.value - exact) / *mc.std_error;
            worst_z = std::max(worst_z, z);
            mc_bad += z > 4.0;
            const double m = std::ldexp(1.0, bits);
            const double id_err = std::abs(delta1_sk_upper2(ch, identity, bits).value -
                                           (1.0 - ch.spectrum[1] / ch.spectrum[0]) / (m + 1.0));
            worst_id = std::max(worst_id, id_err);
            id_bad += id_err > 1e-12;
        }
        o.pass = upper_bad == 0 && mc_bad == 0 && id_bad == 0;
        o.detail = fmt("exact>upper on %d/100 pairs (worst exact/upper %.1f); exact vs MC outside 4 stderr on %d/100 "
                       "(worst z %.2f); identity reduction worst error %.1e",
                       upper_bad, worst_ratio, mc_bad, worst_z, worst_id);
        return o;
    }

    Outcome criterion_11()
    {
        RngStream rng(seed, 1100);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k)
        {
            const auto ch = make_realization(sample_gaussian_matrix(2, 2, rng));
            const auto u = make_skew(sample_haar_unitary(2, rng));
            for (unsigned b = 0; b <= 8; ++b)
                worst = std::max(worst, std::abs(delta1_sk_exact2(ch, u, b).value - delta1_exact(ch.spectrum, b).value));
        }
        return {worst <= 1e-9, fmt("20 unitaries, B=0..8: max deviation %.2e", worst)};
    }

    Outcome criterion_12()
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        const auto st = ComplexMatrix::diagonal({6.4, 4.8, 3.2, 1.6});
        const auto sr = ComplexMatrix::diagonal({7.0, 5.0, 3.0, 1.0});
        const ChannelModel model = kronecker_from_covariances(st, sr);
        const auto a2 = build_skew_a2(st, 1.0, 1.0);
        for (unsigned b = 1; b <= 4; ++b)
        {
            const RngStream root = RngStream(seed, 1200).child(b);
            const auto raw = avg_delta_snr(model, b, 1000, 100, root);
            const auto sk = avg_delta_snr_sk(model, a2, b, 1000, 100, root);
            const double se = std::hypot(*raw.std_error, *sk.std_error);
            const double gap = raw.value - sk.value;
            o.pass &= gap > 4.0 * se;
            o.detail += fmt("B=%u rvq=%.4f A2=%.4f gap/se=%.1f; ", b, raw.value, sk.value, gap / se);
        }
        const double t = seconds_since(t0);
        o.pass &= t < 600.0;
        o.detail += fmt("%.1f s", t);
        return o;
    }

    std::map<std::string, std::string> read_csvs(const std::filesystem::path &dir)
    {
        std::map<std::string, std::string> out;
        for (const auto &e : std::filesystem::directory_iterator(dir))
            if (e.path().extension() == ".csv")
            {
                std::ifstream f(e.path(), std::ios::binary);
                std::stringstream s;
                s << f.rdbuf();
                out[e.path().filename().string()] = s.str();
            }
        return out;
    }

    Outcome criterion_13()
    {
        Outcome o;
        const auto root = std::filesystem::temp_directory_path() / "rvqlab_acceptance_13";
        std::filesystem::remove_all(root);
        const nlohmann::json trials{{"channels", 8},   {"codebooks", 8},         {"samples", 4000},
                                    {"optimizer_channels", 3}, {"optimizer_budget", 80}};
        std::size_t compared = 0;
        for (const auto &name : preset_names())
        {
            nlohmann::json doc{{"experiment", name}, {"trials", trials}, {"seed", 7}};
            if (name == "custom")
                doc["model"] = {{"type", "iid"}, {"n_t", 3}, {"n_r", 2}};
            if (name == "fig3")
                doc["bits"] = {2, 4};
            std::map<std::string, std::string> runs[2];
            for (int w = 0; w < 2; ++w)
            {
                auto c = parse_config(doc);
                c.threads = w == 0 ? 1 : 8;
                c.output_dir = (root / (name + "_" + std::to_string(c.threads))).string();
                run_experiment(c);
                runs[w] = read_csvs(c.output_dir);
            }
            const bool same = !runs[0].empty() && runs[0] == runs[1];
            o.pass &= same;
            compared += runs[0].size();
            if (!same)
                o.detail += name + " differs; ";
        }
        set_worker_count(1);
        std::filesystem::remove_all(root);
        o.detail += fmt("%zu CSV files compared across 1 and 8 workers", compared);
        return o;
    }

    const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2,  criterion_3,  criterion_4,
                                                         criterion_5, criterion_6,  criterion_7,  criterion_8,
                                                         criterion_9, criterion_10, criterion_11, criterion_12,
                                                         criterion_13};
}

int main(int argc, char **argv)
{
    CLI::App app{"rvqlab acceptance criteria"};
    unsigned only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-13)")->check(CLI::Range(1, 13));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        if (only != 0 && only != i + 1)
            continue;
        Outcome o;
        try
        {
            o = criteria[i]();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
        std::fflush(stdout);
        all_pass &= o.pass;
    }
    return all_pass ? 0 : 1;
}
