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

#include "rvqlab/harness.hpp"
#include "rvqlab/channel.hpp"
#include "rvqlab/codebook.hpp"
#include "rvqlab/errors.hpp"
#include "rvqlab/loss.hpp"
#include "rvqlab/ordering.hpp"
#include "rvqlab/parallel.hpp"
#include "rvqlab/skew.hpp"
#include "rvqlab/wnorm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <type_traits>

namespace rvqlab
{
    using nlohmann::json;

    namespace
    {
        const std::vector<EigenSpectrum> &fixed_spectra()
        {
            static const std::vector<EigenSpectrum> s{EigenSpectrum{2, 1}, EigenSpectrum{3, 2, 1},
                                                      EigenSpectrum{4, 3, 2, 1}};
            return s;
        }

        std::vector<unsigned> bit_range(unsigned lo, unsigned hi)
        {
            std::vector<unsigned> out;
            for (unsigned b = lo; b <= hi; ++b)
                out.push_back(b);
            return out;
        }

        bool closed_form_preset(const std::string &name)
        {
            return name == "fig2" || name == "fig3" || name == "fig5a" || name == "fig5b";
        }

        bool skew_preset(const std::string &name) { return name.rfind("fig6", 0) == 0; }

        double value_or_nan(const std::function<double()> &f)
        {
            try
            {
                return f();
            }
            catch (const Error &)
            {
                return std::nan("");
            }
        }

        // --- JSON field readers; every failure names the field path

        template <class T>
        T read_number(const json &v, const std::string &path)
        {
            if constexpr (std::is_floating_point_v<T>)
            {
                if (!v.is_number())
                    throw ConfigError(path, "expected a number");
                const double x = v.get<double>();
                if (!std::isfinite(x))
                    throw ConfigError(path, "expected a finite number");
                return x;
            }
            else
            {
                if (!v.is_number_integer() && !v.is_number_unsigned())
                    throw ConfigError(path, "expected an integer");
                if (v.is_number_integer() && v.get<std::int64_t>() < 0)
                    throw ConfigError(path, "expected a nonnegative integer");
                const auto u = v.get<std::uint64_t>();
                if (u > std::numeric_limits<T>::max())
                    throw ConfigError(path, "integer out of range");
                return T(u);
            }
        }

        template <class T>
        std::vector<T> read_list(const json &v, const std::string &path)
        {
            if (!v.is_array())
                throw ConfigError(path, "expected an array");
            std::vector<T> out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out.push_back(read_number<T>(v[i], path + "[" + std::to_string(i) + "]"));
            return out;
        }

        std::vector<unsigned> read_bits(const json &v)
        {
            if (v.is_object())
            {
                for (const auto &[key, _] : v.items())
                    if (key != "from" && key != "to")
                        throw ConfigError("bits." + key, "unknown field");
                if (!v.contains("from") || !v.contains("to"))
                    throw ConfigError("bits", "range needs both from and to");
                const auto lo = read_number<unsigned>(v["from"], "bits.from");
                const auto hi = read_number<unsigned>(v["to"], "bits.to");
                if (hi < lo)
                    throw ConfigError("bits", "range end precedes its start");
                if (hi > 1000)
                    throw ConfigError("bits.to", "integer out of range");
                return bit_range(lo, hi);
            }
            return read_list<unsigned>(v, "bits");
        }

        EigenSpectrum read_spectrum(const json &v, const std::string &path)
        {
            const auto vals = read_list<double>(v, path);
            if (vals.empty())
                throw ConfigError(path, "spectrum must not be empty");
            try
            {
                return EigenSpectrum(vals);
            }
            catch (const Error &e)
            {
                throw ConfigError(path, e.what());
            }
        }

        ChannelModel build_model(const json &m)
        {
            if (!m.is_object())
                throw ConfigError("model", "expected an object");
            if (!m.contains("type") || !m["type"].is_string())
                throw ConfigError("model.type", "expected one of iid, kronecker, fixed");
            const std::string type = m["type"].get<std::string>();
            auto allow = [&](std::set<std::string> keys)
            {
                keys.insert("type");
                for (const auto &[key, _] : m.items())
                    if (!keys.count(key))
                        throw ConfigError("model." + key, "unknown field");
            };
            auto need = [&](const char *key) -> const json &
            {
                if (!m.contains(key))
                    throw ConfigError(std::string("model.") + key, "required field missing");
                return m[key];
            };
            if (type == "iid")
            {
                allow({"n_t", "n_r", "power_scale"});
                IidModel out;
                out.n_t = read_number<std::size_t>(need("n_t"), "model.n_t");
                out.n_r = read_number<std::size_t>(need("n_r"), "model.n_r");
                if (m.contains("power_scale"))
                    out.power_scale = read_number<double>(m["power_scale"], "model.power_scale");
                if (out.n_t < 2 || out.n_t > 64 || out.n_r < 1 || out.n_r > 64)
                    throw ConfigError("model", "antenna counts must satisfy 2 <= n_t <= 64, 1 <= n_r <= 64");
                if (!(out.power_scale > 0.0))
                    throw ConfigError("model.power_scale", "must be positive");
                return out;
            }
            if (type == "kronecker")
            {
                allow({"sigma_t", "sigma_r"});
                const auto st = read_spectrum(need("sigma_t"), "model.sigma_t");
                const auto sr = read_spectrum(need("sigma_r"), "model.sigma_r");
                if (st.size() < 2 || st.size() > 64 || sr.size() > 64)
                    throw ConfigError("model.sigma_t", "needs between 2 and 64 eigenvalues");
                try
                {
                    return kronecker_from_covariances(ComplexMatrix::diagonal(st.values()),
                                                      ComplexMatrix::diagonal(sr.values()));
                }
                catch (const Error &e)
                {
                    throw ConfigError("model", e.what());
                }
            }
            if (type == "fixed")
            {
                allow({"lambda", "frozen"});
                FixedSpectrumModel out;
                out.lambda = read_spectrum(need("lambda"), "model.lambda");
                if (out.lambda.size() < 2 || out.lambda.size() > 64)
                    throw ConfigError("model.lambda", "needs between 2 and 64 eigenvalues");
                if (m.contains("frozen"))
                {
                    if (!m["frozen"].is_boolean())
                        throw ConfigError("model.frozen", "expected a boolean");
                    out.frozen = m["frozen"].get<bool>();
                }
                return out;
            }
            throw ConfigError("model.type", "expected one of iid, kronecker, fixed");
        }

        // --- table helpers

        using Row = std::vector<std::string>;

        std::string fmt_count(std::size_t n) { return std::to_string(n); }

        std::string fmt_opt(const std::optional<double> &v) { return v ? format_real(*v) : std::string("nan"); }

        RngStream stage(const ExperimentConfig &c, std::uint64_t tag) { return RngStream(c.seed, 0).child(tag); }

        // --- presets

        CsvTable run_fig1(const ExperimentConfig &c)
        {
            CsvTable t{"fig1", {"n_t", "x", "cdf_exact", "cdf_empirical"}, {}};
            const auto &spectra = fixed_spectra();
            for (std::size_t li = 0; li < spectra.size(); ++li)
            {
                const WeightedNormLaw law(spectra[li]);
                const auto samples = empirical_cdf(law, c.trials.samples, stage(c, 1).child(li));
                const double lo = spectra[li].back(), hi = spectra[li].front();
                constexpr int n_points = 101;
                for (int k = 0; k < n_points; ++k)
                {
                    const double x = lo + (hi - lo) * double(k) / double(n_points - 1);
                    t.rows.push_back({fmt_count(law.n()), format_real(x), format_real(law.cdf(x)),
                                      format_real(empirical_cdf_at(samples, x))});
                }
            }
            return t;
        }

        CsvTable run_fig2(const ExperimentConfig &c)
        {
            CsvTable t{"fig2", {"n_t", "B", "delta1_mc", "stderr", "delta1_exact_or_appx", "delta1_asympt"}, {}};
            const auto &spectra = fixed_spectra();
            for (std::size_t li = 0; li < spectra.size(); ++li)
            {
                const auto &lam = spectra[li];
                const auto channel = diagonal_channel(lam);
                for (unsigned b : c.bits)
                {
                    const auto mc = delta1_mc(channel, b, c.trials.codebooks, stage(c, 2).child(li).child(b));
                    const double theory = lam.size() <= 3 ? delta1_exact(lam, b).value : delta1_appx(lam, b).value;
                    const double asym = value_or_nan([&]
                                                     { return delta1_asympt(lam, b).value; });
                    t.rows.push_back({fmt_count(lam.size()), fmt_count(b), format_real(mc.value),
                                      fmt_opt(mc.std_error), format_real(theory), format_real(asym)});
                }
            }
            return t;
        }

        CsvTable run_fig3(const ExperimentConfig &c)
        {
            CsvTable t{"fig3", {"i", "x", "B", "delta1", "monotone_chain"}, {}};
            const auto xs = schur_grid(0.01, 0.75, 0.005);
            const auto family = schur_family(0.01, 0.75, 0.005);
            for (unsigned b : c.bits)
            {
                const auto report = verify_schur(family, b, [](const EigenSpectrum &s, unsigned bb)
                                                 { return delta1_quadrature(s, bb); });
                for (std::size_t i = 0; i < family.size(); ++i)
                    t.rows.push_back({fmt_count(i + 1), format_real(xs[i]), fmt_count(b),
                                      format_real(report.values[i]), report.monotone ? "1" : "0"});
            }
            return t;
        }

        CsvTable run_fig4(const ExperimentConfig &c, bool mutual_info)
        {
            CsvTable t{mutual_info ? "fig4b" : "fig4a",
                       {"case", "rank_sigma_t", "B", mutual_info ? "delta_mi" : "delta_snr", "stderr", "d1", "d2",
                        "d1_times_d2"},
                       {}};
            const std::vector<std::vector<double>> cases{
                {16, 0, 0, 0}, {8, 8, 0, 0}, {16.0 / 3, 16.0 / 3, 16.0 / 3, 0}, {4, 4, 4, 4}};
            const std::vector<double> sigma_r{1.6 * 4, 1.6 * 3, 1.6 * 2, 1.6 * 1};
            for (std::size_t ci = 0; ci < cases.size(); ++ci)
            {
                const ComplexMatrix st = ComplexMatrix::diagonal(cases[ci]);
                const ChannelModel model = kronecker_from_covariances(st, ComplexMatrix::diagonal(sigma_r));
                std::size_t rank = 0;
                for (double v : cases[ci])
                    rank += v > 0.0;
                double d1 = std::nan(""), d2 = std::nan(""), prod = std::nan("");
                try
                {
                    const auto h = hardening_approx(st);
                    d1 = h.d1, d2 = h.d2, prod = h.product;
                }
                catch (const DegenerateSpectrumError &)
                {
                }
                for (unsigned b : c.bits)
                {
                    const RngStream rng = stage(c, 4).child(ci).child(b);
                    const auto e = mutual_info ? avg_delta_mi(model, b, c.rho, c.trials.channels, c.trials.codebooks, rng)
                                               : avg_delta_snr(model, b, c.trials.channels, c.trials.codebooks, rng);
                    t.rows.push_back({fmt_count(ci + 1), fmt_count(rank), fmt_count(b), format_real(e.value),
                                      fmt_opt(e.std_error), format_real(d1), format_real(d2), format_real(prod)});
                }
            }
            return t;
        }

        CsvTable run_fig5(const ExperimentConfig &c, bool sweep_rho)
        {
            CsvTable t{sweep_rho ? "fig5b" : "fig5a",
                       {"n_t", "B", "rho", "delta2_mc", "stderr", "delta2_exact_or_appx", "delta2_asympt_prop3",
                        "delta2_asympt_corollary3"},
                       {}};
            std::vector<double> rhos{c.rho};
            if (sweep_rho)
            {
                rhos.clear();
                for (double db : c.rho_db)
                    rhos.push_back(std::pow(10.0, db / 10.0));
            }
            const auto &spectra = fixed_spectra();
            for (std::size_t li = 0; li < spectra.size(); ++li)
            {
                const auto &lam = spectra[li];
                const auto channel = diagonal_channel(lam);
                for (std::size_t ri = 0; ri < rhos.size(); ++ri)
                    for (unsigned b : c.bits)
                    {
                        const double rho = rhos[ri];
                        const auto mc = delta2_mc(channel, b, rho, c.trials.codebooks,
                                                  stage(c, 5).child(li).child(ri).child(b));
                        const double theory = lam.size() == 2 ? delta2_exact2(lam, rho, b).value
                                                              : delta2_appx(lam, rho, b).value;
                        const double p3 = value_or_nan([&]
                                                       { return delta2_asympt(lam, rho, b, AsymptoticForm::prop3).value; });
                        const double c3 = value_or_nan([&]
                                                       { return delta2_asympt(lam, rho, b, AsymptoticForm::corollary3).value; });
                        t.rows.push_back({fmt_count(lam.size()), fmt_count(b), format_real(rho), format_real(mc.value),
                                          fmt_opt(mc.std_error), format_real(theory), format_real(p3), format_real(c3)});
                    }
            }
            return t;
        }

        json skew_to_json(const std::string &scheme, double alpha, std::optional<double> beta,
                          std::optional<double> objective, const ComplexMatrix &a)
        {
            json re = json::array(), im = json::array();
            for (std::size_t r = 0; r < a.rows(); ++r)
            {
                json rr = json::array(), ii = json::array();
                for (std::size_t col = 0; col < a.cols(); ++col)
                {
                    rr.push_back(a(r, col).real());
                    ii.push_back(a(r, col).imag());
                }
                re.push_back(rr);
                im.push_back(ii);
            }
            json j{{"scheme", scheme}, {"alpha", alpha}, {"real", re}, {"imag", im}};
            j["beta"] = beta ? json(*beta) : json(nullptr);
            j["objective"] = objective ? json(*objective) : json(nullptr);
            return j;
        }

        struct Scheme
        {
            std::string name;
            double alpha;
            std::optional<double> beta;
            std::optional<SkewMatrix> skew; // empty for raw RVQ
        };

        PresetOutput run_fig6_fixed(const ExperimentConfig &c, const std::string &name, const EigenSpectrum &lam)
        {
            PresetOutput out;
            CsvTable t{name, {"scheme", "alpha", "B", "delta1", "stderr", "objective"}, {}};
            const FixedSpectrumModel model{lam, true};
            const auto channel = diagonal_channel(lam);
            json skews = json::array();

            std::vector<Scheme> schemes{{"rvq", std::nan(""), std::nullopt, std::nullopt}};
            std::vector<double> objectives{std::nan("")};
            for (std::size_t ai = 0; ai < c.alphas.size(); ++ai)
            {
                const auto opt = optimize_skew_a1(model, c.alphas[ai], c.trials.optimizer_channels,
                                                  stage(c, 6).child(ai), c.trials.optimizer_budget);
                schemes.push_back({"A1", c.alphas[ai], std::nullopt, opt.skew});
                objectives.push_back(opt.objective);
                skews.push_back(skew_to_json("A1", c.alphas[ai], std::nullopt, opt.objective, opt.skew.a));
            }
            for (std::size_t si = 0; si < schemes.size(); ++si)
                for (unsigned b : c.bits)
                {
                    // same codebook streams for every scheme
                    const RngStream rng = stage(c, 7).child(b);
                    const auto e = schemes[si].skew ? delta1_sk_mc(channel, *schemes[si].skew, b, c.trials.codebooks, rng)
                                                    : delta1_mc(channel, b, c.trials.codebooks, rng);
                    t.rows.push_back({schemes[si].name, format_real(schemes[si].alpha), fmt_count(b),
                                      format_real(e.value), fmt_opt(e.std_error), format_real(objectives[si])});
                }
            out.tables.push_back(std::move(t));
            out.skews = json{{"experiment", name}, {"skews", skews}};
            return out;
        }

        PresetOutput run_fig6_kronecker(const ExperimentConfig &c, const std::string &name)
        {
            PresetOutput out;
            CsvTable t{name, {"scheme", "alpha", "beta", "B", "delta_snr", "stderr"}, {}};
            const std::vector<double> st{1.6 * 4, 1.6 * 3, 1.6 * 2, 1.6 * 1};
            const std::vector<double> sr{7, 5, 3, 1};
            const ComplexMatrix sigma_t = ComplexMatrix::diagonal(st);
            const ChannelModel model = kronecker_from_covariances(sigma_t, ComplexMatrix::diagonal(sr));
            json skews = json::array();

            std::vector<Scheme> schemes{{"rvq", std::nan(""), std::nullopt, std::nullopt}};
            for (std::size_t ai = 0; ai < c.alphas.size(); ++ai)
            {
                const auto opt = optimize_skew_a1(model, c.alphas[ai], c.trials.optimizer_channels,
                                                  stage(c, 8).child(ai), c.trials.optimizer_budget);
                schemes.push_back({"A1", c.alphas[ai], std::nullopt, opt.skew});
                skews.push_back(skew_to_json("A1", c.alphas[ai], std::nullopt, opt.objective, opt.skew.a));
            }
            for (double alpha : c.alphas)
                for (double beta : c.betas)
                {
                    const auto a2 = build_skew_a2(sigma_t, alpha, beta);
                    schemes.push_back({"A2", alpha, beta, a2});
                    skews.push_back(skew_to_json("A2", alpha, beta, std::nullopt, a2.a));
                }
            for (const auto &s : schemes)
                for (unsigned b : c.bits)
                {
                    const RngStream rng = stage(c, 9).child(b);
                    const auto e = s.skew ? avg_delta_snr_sk(model, *s.skew, b, c.trials.channels, c.trials.codebooks, rng)
                                          : avg_delta_snr(model, b, c.trials.channels, c.trials.codebooks, rng);
                    t.rows.push_back({s.name, format_real(s.alpha), s.beta ? format_real(*s.beta) : "nan", fmt_count(b),
                                      format_real(e.value), fmt_opt(e.std_error)});
                }
            out.tables.push_back(std::move(t));
            out.skews = json{{"experiment", name}, {"skews", skews}};
            return out;
        }

        CsvTable run_custom(const ExperimentConfig &c)
        {
            CsvTable t{"custom", {"B", "value", "stderr", "method"}, {}};
            const ChannelModel model = build_model(c.model);
            for (unsigned b : c.bits)
            {
                const RngStream rng = stage(c, 10).child(b);
                const auto e = c.quantity == "delta2"
                                   ? avg_delta_mi(model, b, c.rho, c.trials.channels, c.trials.codebooks, rng)
                                   : avg_delta_snr(model, b, c.trials.channels, c.trials.codebooks, rng);
                t.rows.push_back({fmt_count(b), format_real(e.value), fmt_opt(e.std_error), to_string(e.method)});
            }
            return t;
        }

        std::uint64_t fnv1a(const std::string &s)
        {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (unsigned char ch : s)
            {
                h ^= ch;
                h *= 0x100000001b3ULL;
            }
            return h;
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            const auto tmp = path.string() + ".partial";
            {
                std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
                if (!f)
                    throw Error("cannot open " + tmp + " for writing");
                f << text;
                if (!f)
                    throw Error("failed writing " + tmp);
            }
            std::filesystem::rename(tmp, path);
        }
    }

    const std::vector<std::string> &preset_names()
    {
        static const std::vector<std::string> names{"fig1",  "fig2",  "fig3",  "fig4a", "fig4b", "fig5a",
                                                    "fig5b", "fig6a", "fig6b", "fig6c", "fig6d", "custom"};
        return names;
    }

    ExperimentConfig preset_config(const std::string &name)
    {
        const auto &names = preset_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw ConfigError("experiment", "unknown preset '" + name + "'");
        ExperimentConfig c;
        c.experiment = name;
        c.alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
        c.betas = {0.5, 1.0, 1.5, 2.0};
        c.rho_db = {-10, -5, 0, 5, 10, 15, 20};
        if (name == "fig1")
            c.bits = {};
        else if (name == "fig2" || name == "fig5a")
        {
            c.bits = bit_range(1, 8);
            c.trials.codebooks = 1000;
        }
        else if (name == "fig3")
            c.bits = bit_range(1, 8);
        else if (name == "fig4a" || name == "fig4b")
        {
            c.bits = bit_range(1, 6);
            c.trials.channels = 200;
            c.trials.codebooks = 50;
        }
        else if (name == "fig5b")
        {
            c.bits = {4};
            c.trials.codebooks = 1000;
        }
        else if (name == "fig6a" || name == "fig6b")
        {
            c.bits = bit_range(1, 6);
            c.trials.codebooks = 1000;
            c.trials.optimizer_channels = 1;
            c.trials.optimizer_budget = 2000;
        }
        else if (name == "fig6c" || name == "fig6d")
        {
            c.bits = name == "fig6c" ? std::vector<unsigned>{2, 4} : bit_range(1, 6);
            c.trials.channels = 200;
            c.trials.codebooks = 50;
            c.trials.optimizer_channels = 100;
            c.trials.optimizer_budget = 1000;
        }
        else
            c.bits = bit_range(1, 4);
        return c;
    }

    ExperimentConfig parse_config(const json &doc)
    {
        if (!doc.is_object())
            throw ConfigError("$", "configuration must be a JSON object");
        static const std::set<std::string> known{"experiment", "model", "quantity", "bits", "rho", "rho_db", "alphas",
                                                 "betas", "trials", "seed", "threads", "output_dir"};
        for (const auto &[key, _] : doc.items())
            if (!known.count(key))
                throw ConfigError(key, "unknown field");
        if (!doc.contains("experiment") || !doc["experiment"].is_string())
            throw ConfigError("experiment", "expected a preset name string");
        ExperimentConfig c = preset_config(doc["experiment"].get<std::string>());

        if (doc.contains("model"))
        {
            if (c.experiment != "custom")
                throw ConfigError("model", "only custom experiments take a model");
            c.model = doc["model"];
            build_model(c.model);
        }
        else if (c.experiment == "custom")
            throw ConfigError("model", "custom experiments need a model");
        if (doc.contains("quantity"))
        {
            if (!doc["quantity"].is_string())
                throw ConfigError("quantity", "expected delta1 or delta2");
            c.quantity = doc["quantity"].get<std::string>();
            if (c.quantity != "delta1" && c.quantity != "delta2")
                throw ConfigError("quantity", "expected delta1 or delta2");
        }
        if (doc.contains("bits"))
            c.bits = read_bits(doc["bits"]);
        if (doc.contains("rho"))
            c.rho = read_number<double>(doc["rho"], "rho");
        if (doc.contains("rho_db"))
            c.rho_db = read_list<double>(doc["rho_db"], "rho_db");
        if (doc.contains("alphas"))
            c.alphas = read_list<double>(doc["alphas"], "alphas");
        if (doc.contains("betas"))
            c.betas = read_list<double>(doc["betas"], "betas");
        if (doc.contains("trials"))
        {
            const json &t = doc["trials"];
            if (!t.is_object())
                throw ConfigError("trials", "expected an object");
            for (const auto &[key, v] : t.items())
            {
                const std::string path = "trials." + key;
                if (key == "channels")
                    c.trials.channels = read_number<std::size_t>(v, path);
                else if (key == "codebooks")
                    c.trials.codebooks = read_number<std::size_t>(v, path);
                else if (key == "samples")
                    c.trials.samples = read_number<std::size_t>(v, path);
                else if (key == "optimizer_channels")
                    c.trials.optimizer_channels = read_number<std::size_t>(v, path);
                else if (key == "optimizer_budget")
                    c.trials.optimizer_budget = read_number<std::size_t>(v, path);
                else
                    throw ConfigError(path, "unknown field");
            }
        }
        if (doc.contains("seed"))
            c.seed = read_number<std::uint64_t>(doc["seed"], "seed");
        if (doc.contains("threads"))
            c.threads = read_number<unsigned>(doc["threads"], "threads");
        if (doc.contains("output_dir"))
        {
            if (!doc["output_dir"].is_string())
                throw ConfigError("output_dir", "expected a path string");
            c.output_dir = doc["output_dir"].get<std::string>();
        }
        return c;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("$", "cannot open " + path.string());
        json doc;
        try
        {
            doc = json::parse(f);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("$", std::string("malformed JSON: ") + e.what());
        }
        return parse_config(doc);
    }

    std::vector<ConfigIssue> validate_config(const ExperimentConfig &c)
    {
        std::vector<ConfigIssue> issues;
        const unsigned cap = closed_form_preset(c.experiment) ? max_closed_form_bits : max_codebook_bits;
        for (std::size_t i = 0; i < c.bits.size(); ++i)
            if (c.bits[i] > cap)
                issues.push_back({"bits[" + std::to_string(i) + "]",
                                  "exceeds the cap of " + std::to_string(cap) + " for this experiment"});
        if (c.experiment != "fig1" && c.bits.empty())
            issues.push_back({"bits", "at least one value of B is required"});
        if (c.trials.codebooks < 2)
            issues.push_back({"trials.codebooks", "Monte Carlo estimates need at least 2 codebooks"});
        if (c.trials.channels < 2)
            issues.push_back({"trials.channels", "Monte Carlo estimates need at least 2 channel draws"});
        if (c.trials.samples < 2)
            issues.push_back({"trials.samples", "Monte Carlo estimates need at least 2 samples"});
        if (c.trials.optimizer_channels < 1)
            issues.push_back({"trials.optimizer_channels", "the optimizer needs at least 1 channel draw"});
        if (c.trials.optimizer_budget < 1)
            issues.push_back({"trials.optimizer_budget", "the optimizer needs a budget of at least 1"});
        if (!(c.rho > 0.0))
            issues.push_back({"rho", "must be positive"});
        for (std::size_t i = 0; i < c.alphas.size(); ++i)
            if (!(c.alphas[i] >= 0.0 && c.alphas[i] <= 1.0))
                issues.push_back({"alphas[" + std::to_string(i) + "]", "must lie in [0, 1]"});
        for (std::size_t i = 0; i < c.betas.size(); ++i)
            if (!(c.betas[i] >= 0.0))
                issues.push_back({"betas[" + std::to_string(i) + "]", "must be nonnegative"});
        if (c.experiment == "fig5b" && c.rho_db.empty())
            issues.push_back({"rho_db", "the SNR sweep needs at least one value"});
        if (skew_preset(c.experiment) && c.alphas.empty())
            issues.push_back({"alphas", "skew experiments need at least one alpha"});
        return issues;
    }

    std::vector<ConfigIssue> validate_config(const json &doc)
    {
        try
        {
            return validate_config(parse_config(doc));
        }
        catch (const ConfigError &e)
        {
            const std::string what = e.what();
            const std::string prefix = e.field_path() + ": ";
            return {{e.field_path(), what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what}};
        }
    }

    json config_to_json(const ExperimentConfig &c)
    {
        json j;
        j["experiment"] = c.experiment;
        if (c.experiment == "custom")
        {
            j["model"] = c.model;
            j["quantity"] = c.quantity;
        }
        j["bits"] = c.bits;
        j["rho"] = c.rho;
        j["rho_db"] = c.rho_db;
        j["alphas"] = c.alphas;
        j["betas"] = c.betas;
        j["trials"] = {{"channels", c.trials.channels},
                       {"codebooks", c.trials.codebooks},
                       {"samples", c.trials.samples},
                       {"optimizer_channels", c.trials.optimizer_channels},
                       {"optimizer_budget", c.trials.optimizer_budget}};
        j["seed"] = c.seed;
        return j;
    }

    std::string config_hash(const ExperimentConfig &c)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_to_json(c).dump())));
        return buf;
    }

    std::string format_real(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::string render_csv(const CsvTable &table, const std::string &manifest_name)
    {
        std::string out;
        auto line = [&](const std::vector<std::string> &cells)
        {
            for (std::size_t i = 0; i < cells.size(); ++i)
            {
                if (i)
                    out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(table.header);
        for (const auto &r : table.rows)
            line(r);
        out += "# manifest: " + manifest_name + "\n";
        return out;
    }

    PresetOutput compute_preset(const ExperimentConfig &c)
    {
        const auto issues = validate_config(c);
        if (!issues.empty())
            throw ConfigError(issues.front().field, issues.front().message);
        const std::string &e = c.experiment;
        PresetOutput out;
        if (e == "fig1")
            out.tables.push_back(run_fig1(c));
        else if (e == "fig2")
            out.tables.push_back(run_fig2(c));
        else if (e == "fig3")
            out.tables.push_back(run_fig3(c));
        else if (e == "fig4a" || e == "fig4b")
            out.tables.push_back(run_fig4(c, e == "fig4b"));
        else if (e == "fig5a" || e == "fig5b")
            out.tables.push_back(run_fig5(c, e == "fig5b"));
        else if (e == "fig6a")
            out = run_fig6_fixed(c, e, EigenSpectrum{4, 3, 2, 1});
        else if (e == "fig6b")
            out = run_fig6_fixed(c, e, EigenSpectrum{1.6, 1.4, 1.2, 1.0});
        else if (e == "fig6c" || e == "fig6d")
            out = run_fig6_kronecker(c, e);
        else
            out.tables.push_back(run_custom(c));
        return out;
    }

    RunResult run_experiment(const ExperimentConfig &c)
    {
        const auto t0 = std::chrono::steady_clock::now();
        set_worker_count(c.threads);
        const std::filesystem::path dir(c.output_dir);
        std::filesystem::create_directories(dir);
        RunResult result;
        result.manifest = dir / "manifest.json";

        json manifest{{"tool", "rvqlab"},
                      {"version", version_string},
                      {"experiment", c.experiment},
                      {"seed", c.seed},
                      {"config_hash", config_hash(c)},
                      {"config", config_to_json(c)},
                      {"threads", worker_count()},
                      {"compiler", __VERSION__},
                      {"json_library", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                      {"complete", false},
                      {"outputs", json::array()}};
        write_text(result.manifest, manifest.dump(2) + "\n");

        const PresetOutput out = compute_preset(c);
        for (const auto &t : out.tables)
        {
            const auto path = dir / (t.name + ".csv");
            write_text(path, render_csv(t, "manifest.json"));
            result.outputs.push_back(path);
        }
        if (out.skews)
        {
            const auto path = dir / (c.experiment + "_skews.json");
            write_text(path, out.skews->dump(2) + "\n");
            result.outputs.push_back(path);
        }

        result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const auto &p : result.outputs)
            manifest["outputs"].push_back(p.filename().string());
        manifest["wall_time_seconds"] = result.wall_seconds;
        manifest["complete"] = true;
        write_text(result.manifest, manifest.dump(2) + "\n");
        return result;
    }
}
