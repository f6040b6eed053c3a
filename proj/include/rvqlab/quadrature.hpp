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

#ifndef RVQLAB_QUADRATURE_HPP
#define RVQLAB_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace rvqlab
{
    struct QuadratureOptions
    {
        double abs_tol = 1e-10;
        std::size_t max_intervals = 1000000; // ResourceLimitError when exceeded
    };

    // Recursive Simpson with Richardson correction
    double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                            const QuadratureOptions &opt = {});

    // Integrates over [points.front(), points.back()], restarting at every breakpoint.
    // Zero-width pieces are skipped. The tolerance is shared across pieces by length.
    double integrate_piecewise(const std::function<double(double)> &f, std::span<const double> points,
                               const QuadratureOptions &opt = {});
}

#endif
