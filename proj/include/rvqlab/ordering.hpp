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

#ifndef RVQLAB_ORDERING_HPP
#define RVQLAB_ORDERING_HPP

#include "rvqlab/loss.hpp"
#include "rvqlab/numerics.hpp"

#include <functional>
#include <vector>

namespace rvqlab
{
    enum class MajorizationOutcome
    {
        lhs_majorized_by_rhs,
        rhs_majorized_by_lhs,
        equal,
        incomparable
    };

    std::string to_string(MajorizationOutcome outcome);

    // Prefix-sum comparison relative to the common total; totals differing by more than 1e-9 relative throw
    MajorizationOutcome majorize_compare(const EigenSpectrum &lambda, const EigenSpectrum &mu);

    // [1-x, x/3, x/3, x/3] for x = x_start + i x_step up to x_end inclusive
    std::vector<EigenSpectrum> schur_family(double x_start, double x_end, double x_step);
    std::vector<double> schur_grid(double x_start, double x_end, double x_step);

    // rho_c / rank on the first rank entries, zero elsewhere
    EigenSpectrum rank_staircase(std::size_t n_t, std::size_t rank, double rho_c);

    using Delta1Evaluator = std::function<LossEstimate(const EigenSpectrum &, unsigned)>;

    struct SchurReport
    {
        std::vector<double> values;
        std::vector<double> std_errors; // zero for deterministic evaluators
        std::vector<std::size_t> violations; // index i where the pair (i, i+1) breaks the ordering
        bool monotone = true;
    };

    // Checks that Delta_1 never increases when moving to a majorized neighbour.
    // An all-equal member is assigned Delta_1 = 0 without calling the evaluator.
    SchurReport verify_schur(const std::vector<EigenSpectrum> &family, unsigned bits, const Delta1Evaluator &evaluator);
}

#endif
