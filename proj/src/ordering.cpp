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

#include "rvqlab/ordering.hpp"
#include "rvqlab/errors.hpp"
#include "rvqlab/parallel.hpp"

#include <cmath>

namespace rvqlab
{
    std::string to_string(MajorizationOutcome outcome)
    {
        switch (outcome)
        {
        case MajorizationOutcome::lhs_majorized_by_rhs:
            return "lhs-majorized-by-rhs";
        case MajorizationOutcome::rhs_majorized_by_lhs:
            return "rhs-majorized-by-lhs";
        case MajorizationOutcome::equal:
            return "equal";
        case MajorizationOutcome::incomparable:
            return "incomparable";
        }
        return "unknown";
    }

    MajorizationOutcome majorize_compare(const EigenSpectrum &lambda, const EigenSpectrum &mu)
    {
        if (lambda.size() != mu.size() || lambda.size() == 0)
            throw PreconditionError("majorize_compare: spectra must have the same nonzero length");
        const double sl = lambda.sum(), sm = mu.sum();
        if (!(sl > 0.0) || !(sm > 0.0))
            throw PreconditionError("majorize_compare: spectra must have positive sums");
        if (std::abs(sl - sm) > 1e-9 * std::max(sl, sm))
            throw PreconditionError("majorize_compare: spectra must have equal sums");
        constexpr double tol = 1e-12;
        double pl = 0.0, pm = 0.0;
        bool lhs_ahead = false, rhs_ahead = false;
        for (std::size_t i = 0; i < lambda.size(); ++i)
        {
            pl += lambda[i] / sl;
            pm += mu[i] / sm;
            if (pl > pm + tol)
                lhs_ahead = true;
            else if (pm > pl + tol)
                rhs_ahead = true;
        }
        if (lhs_ahead && rhs_ahead)
            return MajorizationOutcome::incomparable;
        if (rhs_ahead)
            return MajorizationOutcome::lhs_majorized_by_rhs;
        if (lhs_ahead)
            return MajorizationOutcome::rhs_majorized_by_lhs;
        return MajorizationOutcome::equal;
    }

    std::vector<double> schur_grid(double x_start, double x_end, double x_step)
    {
        if (!(x_step > 0.0))
            throw PreconditionError("schur_family: step must be positive");
        if (!(x_start > 0.0) || !(x_start <= x_end))
            throw PreconditionError("schur_family: need 0 < x_start <= x_end");
        if (x_end > 0.75)
            throw DomainError("schur_family: x above 0.75 breaks the ordering of the family");
        const auto count = std::size_t(std::floor((x_end - x_start) / x_step + 1e-9)) + 1;
        std::vector<double> xs(count);
        for (std::size_t i = 0; i < count; ++i)
            xs[i] = x_start + double(i) * x_step;
        return xs;
    }

    std::vector<EigenSpectrum> schur_family(double x_start, double x_end, double x_step)
    {
        std::vector<EigenSpectrum> out;
        for (double x : schur_grid(x_start, x_end, x_step))
            out.push_back(EigenSpectrum({1.0 - x, x / 3.0, x / 3.0, x / 3.0}));
        return out;
    }

    EigenSpectrum rank_staircase(std::size_t n_t, std::size_t rank, double rho_c)
    {
        if (rank == 0 || rank > n_t)
            throw PreconditionError("rank_staircase: need 1 <= rank <= N_t");
        if (!(rho_c > 0.0))
            throw PreconditionError("rank_staircase: rho_c must be positive");
        std::vector<double> v(n_t, 0.0);
        for (std::size_t i = 0; i < rank; ++i)
            v[i] = rho_c / double(rank);
        return EigenSpectrum(std::move(v));
    }

    SchurReport verify_schur(const std::vector<EigenSpectrum> &family, unsigned bits, const Delta1Evaluator &evaluator)
    {
        std::vector<MajorizationOutcome> links;
        for (std::size_t i = 0; i + 1 < family.size(); ++i)
        {
            links.push_back(majorize_compare(family[i], family[i + 1]));
            if (links.back() == MajorizationOutcome::incomparable)
                throw PreconditionError("verify_schur: family members " + std::to_string(i) + " and " +
                                        std::to_string(i + 1) + " are incomparable");
        }

        SchurReport report;
        report.values.assign(family.size(), 0.0);
        report.std_errors.assign(family.size(), 0.0);
        parallel_for(family.size(), [&](std::size_t i)
                     {
                         const auto &s = family[i];
                         if (s.front() - s.back() <= 1e-12 * s.front())
                             return;
                         const LossEstimate e = evaluator(s, bits);
                         report.values[i] = e.value;
                         report.std_errors[i] = e.std_error.value_or(0.0); });

        for (std::size_t i = 0; i < links.size(); ++i)
        {
            const double a = report.values[i], b = report.values[i + 1];
            const double se = std::hypot(report.std_errors[i], report.std_errors[i + 1]);
            const double slack = 4.0 * se + 1e-10 + 1e-9 * std::max(std::abs(a), std::abs(b));
            bool broken = false;
            switch (links[i])
            {
            case MajorizationOutcome::lhs_majorized_by_rhs: // i is majorized: expect a <= b
                broken = a > b + slack;
                break;
            case MajorizationOutcome::rhs_majorized_by_lhs:
                broken = b > a + slack;
                break;
            default:
                broken = std::abs(a - b) > slack;
                break;
            }
            if (broken)
                report.violations.push_back(i);
        }
        report.monotone = report.violations.empty();
        return report;
    }
}
