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

#include "rvqlab/quadrature.hpp"
#include "rvqlab/errors.hpp"

#include <cmath>

namespace rvqlab
{
    namespace
    {
        struct SimpsonState
        {
            const std::function<double(double)> &f;
            std::size_t intervals;
            std::size_t budget;
        };

        double simpson_step(SimpsonState &st, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth)
        {
            if (++st.intervals > st.budget)
                throw ResourceLimitError("adaptive_simpson: interval budget exhausted");
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = st.f(lm), frm = st.f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth >= 50 || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
                   simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        }

        double simpson_piece(SimpsonState &st, double a, double b, double tol)
        {
            // 8 seed panels so narrow features are not stepped over
            constexpr int panels = 8;
            const double h = (b - a) / panels;
            double total = 0.0;
            double fa = st.f(a);
            for (int k = 0; k < panels; ++k)
            {
                const double x0 = a + k * h;
                const double x1 = (k + 1 == panels) ? b : a + (k + 1) * h;
                const double xm = 0.5 * (x0 + x1);
                const double fm = st.f(xm), fb = st.f(x1);
                const double whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
                total += simpson_step(st, x0, x1, fa, fm, fb, whole, tol / panels, 0);
                fa = fb;
            }
            return total;
        }
    }

    double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                            const QuadratureOptions &opt)
    {
        if (!(opt.abs_tol > 0.0))
            throw PreconditionError("adaptive_simpson: tolerance must be positive");
        if (a == b)
            return 0.0;
        SimpsonState st{f, 0, opt.max_intervals};
        return simpson_piece(st, a, b, opt.abs_tol);
    }

    double integrate_piecewise(const std::function<double(double)> &f, std::span<const double> points,
                               const QuadratureOptions &opt)
    {
        if (points.size() < 2)
            return 0.0;
        const double span = points.back() - points.front();
        if (span == 0.0)
            return 0.0;
        if (span < 0.0)
            throw PreconditionError("integrate_piecewise: breakpoints must be nondecreasing");
        SimpsonState st{f, 0, opt.max_intervals};
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
        {
            const double a = points[i], b = points[i + 1];
            if (b < a)
                throw PreconditionError("integrate_piecewise: breakpoints must be nondecreasing");
            if (b == a)
                continue;
            total += simpson_piece(st, a, b, opt.abs_tol * (b - a) / span);
        }
        return total;
    }
}
