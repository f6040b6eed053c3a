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

#include "rvqlab/numerics.hpp"
#include "rvqlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace rvqlab
{
    // ---- ComplexMatrix ----

    ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, cplx(0.0, 0.0))
    {
        if (rows == 0 || cols == 0)
            throw PreconditionError("ComplexMatrix: dimensions must be at least 1x1");
    }

    ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries))
    {
        if (rows == 0 || cols == 0)
            throw PreconditionError("ComplexMatrix: dimensions must be at least 1x1");
        if (entries_.size() != rows * cols)
            throw PreconditionError("ComplexMatrix: entry count does not match rows*cols");
    }

    ComplexMatrix ComplexMatrix::identity(std::size_t n)
    {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d)
    {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> d)
    {
        return diagonal(std::span<const double>(d.begin(), d.size()));
    }

    ComplexMatrix ComplexMatrix::adjoint() const
    {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    CVector ComplexMatrix::column(std::size_t c) const
    {
        CVector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    CVector ComplexMatrix::apply(std::span<const cplx> v) const
    {
        if (v.size() != cols_)
            throw PreconditionError("ComplexMatrix::apply: dimension mismatch");
        CVector out(rows_, cplx(0.0, 0.0));
        for (std::size_t r = 0; r < rows_; ++r)
        {
            cplx acc = 0.0;
            const cplx *row = &entries_[r * cols_];
            for (std::size_t c = 0; c < cols_; ++c)
                acc += row[c] * v[c];
            out[r] = acc;
        }
        return out;
    }

    double ComplexMatrix::frobenius_norm() const
    {
        double s = 0.0;
        for (const auto &e : entries_)
            s += std::norm(e);
        return std::sqrt(s);
    }

    double ComplexMatrix::trace_real() const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
            s += (*this)(i, i).real();
        return s;
    }

    double ComplexMatrix::hermitian_defect() const
    {
        if (!is_square())
            return INFINITY;
        double fro = frobenius_norm();
        if (fro == 0.0)
            return 0.0;
        double worst = 0.0;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = r; c < cols_; ++c)
                worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return worst / fro;
    }

    ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &rhs)
    {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw PreconditionError("ComplexMatrix: dimension mismatch in addition");
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i] += rhs.entries_[i];
        return *this;
    }

    ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &rhs)
    {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw PreconditionError("ComplexMatrix: dimension mismatch in subtraction");
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i] -= rhs.entries_[i];
        return *this;
    }

    ComplexMatrix &ComplexMatrix::operator*=(cplx s)
    {
        for (auto &e : entries_)
            e *= s;
        return *this;
    }

    ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b)
    {
        if (a.cols() != b.rows())
            throw PreconditionError("ComplexMatrix: dimension mismatch in product");
        ComplexMatrix m(a.rows(), b.cols());
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t k = 0; k < a.cols(); ++k)
            {
                const cplx ark = a(r, k);
                for (std::size_t c = 0; c < b.cols(); ++c)
                    m(r, c) += ark * b(k, c);
            }
        return m;
    }

    ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    ComplexMatrix adjoint_times(const ComplexMatrix &a, const ComplexMatrix &b)
    {
        if (a.rows() != b.rows())
            throw PreconditionError("adjoint_times: dimension mismatch");
        ComplexMatrix m(a.cols(), b.cols());
        for (std::size_t k = 0; k < a.rows(); ++k)
            for (std::size_t r = 0; r < a.cols(); ++r)
            {
                const cplx akr = std::conj(a(k, r));
                for (std::size_t c = 0; c < b.cols(); ++c)
                    m(r, c) += akr * b(k, c);
            }
        return m;
    }

    double norm2(std::span<const cplx> v)
    {
        double s = 0.0;
        for (const auto &e : v)
            s += std::norm(e);
        return std::sqrt(s);
    }

    cplx inner(std::span<const cplx> a, std::span<const cplx> b)
    {
        if (a.size() != b.size())
            throw PreconditionError("inner: dimension mismatch");
        cplx s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += std::conj(a[i]) * b[i];
        return s;
    }

    double quadratic_form(const ComplexMatrix &m, std::span<const cplx> v)
    {
        const std::size_t n = v.size();
        if (m.rows() != n || m.cols() != n)
            throw PreconditionError("quadratic_form: dimension mismatch");
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
        {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < n; ++c)
                acc += m(r, c) * v[c];
            s += (std::conj(v[r]) * acc).real();
        }
        return s;
    }

    // ---- EigenSpectrum ----

    EigenSpectrum::EigenSpectrum(std::vector<double> values, double clamp_tol)
        : values_(std::move(values))
    {
        for (auto &v : values_)
        {
            if (!std::isfinite(v))
                throw DomainError("EigenSpectrum: non-finite value");
            if (v < 0.0)
            {
                if (v < -clamp_tol)
                    throw DomainError("EigenSpectrum: negative value " + std::to_string(v));
                v = 0.0;
            }
        }
        std::stable_sort(values_.begin(), values_.end(), std::greater<double>());
    }

    EigenSpectrum::EigenSpectrum(std::initializer_list<double> values)
        : EigenSpectrum(std::vector<double>(values)) {}

    double EigenSpectrum::sum() const
    {
        return std::accumulate(values_.begin(), values_.end(), 0.0);
    }

    EigenSpectrum EigenSpectrum::scaled(double c) const
    {
        std::vector<double> v(values_);
        for (auto &x : v)
            x *= c;
        return EigenSpectrum(std::move(v));
    }

    EigenSpectrum HermitianEigen::spectrum() const
    {
        double scale = 1.0;
        for (double v : values)
            scale = std::max(scale, std::abs(v));
        return EigenSpectrum(values, 1e-12 * scale);
    }

    // ---- Jacobi eigensolver ----

    HermitianEigen hermitian_eig(const ComplexMatrix &m)
    {
        if (!m.is_square())
            throw PreconditionError("hermitian_eig: matrix is not square");
        const std::size_t n = m.rows();
        if (n > 64)
            throw PreconditionError("hermitian_eig: dimension exceeds 64");
        if (m.hermitian_defect() > 1e-10)
            throw PreconditionError("hermitian_eig: matrix is not Hermitian");

        ComplexMatrix a(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
        ComplexMatrix v = ComplexMatrix::identity(n);

        for (int sweep = 0; sweep < 100; ++sweep)
        {
            double off = 0.0, diag = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    (r == c ? diag : off) += std::norm(a(r, c));
            if (off == 0.0 || std::sqrt(off) < 1e-14 * std::sqrt(diag))
                break;

            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q)
                {
                    const cplx apq = a(p, q);
                    const double mag = std::abs(apq);
                    if (mag == 0.0)
                        continue;
                    const cplx e = std::conj(apq / mag);
                    const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;

                    // A <- A J, V <- V J
                    for (std::size_t k = 0; k < n; ++k)
                    {
                        const cplx akp = a(k, p), akq = a(k, q);
                        a(k, p) = c * akp - s * e * akq;
                        a(k, q) = s * akp + c * e * akq;
                        const cplx vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * e * vkq;
                        v(k, q) = s * vkp + c * e * vkq;
                    }
                    // A <- J^H A
                    const cplx ec = std::conj(e);
                    for (std::size_t k = 0; k < n; ++k)
                    {
                        const cplx apk = a(p, k), aqk = a(q, k);
                        a(p, k) = c * apk - s * ec * aqk;
                        a(q, k) = s * apk + c * ec * aqk;
                    }
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    a(p, p) = a(p, p).real();
                    a(q, q) = a(q, q).real();
                }
        }

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j)
                         { return a(i, i).real() > a(j, j).real(); });

        HermitianEigen out;
        out.values.resize(n);
        out.vectors = ComplexMatrix(n, n);
        for (std::size_t k = 0; k < n; ++k)
        {
            out.values[k] = a(order[k], order[k]).real();
            for (std::size_t r = 0; r < n; ++r)
                out.vectors(r, k) = v(r, order[k]);
        }
        return out;
    }

    // ---- Special functions ----

    namespace
    {
        constexpr double lanczos_g = 7.0;
        constexpr double lanczos_coef[9] = {
            0.99999999999980993, 676.5203681218851, -1259.1392167224028,
            771.32342877765313, -176.61502916214059, 12.507343278686905,
            -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

        double lanczos_ln_gamma(double x)
        {
            x -= 1.0;
            double acc = lanczos_coef[0];
            for (int i = 1; i < 9; ++i)
                acc += lanczos_coef[i] / (x + i);
            const double t = x + lanczos_g + 0.5;
            return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(acc);
        }

        // Stirling correction sum_k B_2k / (2k(2k-1) z^(2k-1)), z >= 15
        double stirling_tail(double z)
        {
            const double z2 = 1.0 / (z * z);
            return (1.0 / 12.0 + z2 * (-1.0 / 360.0 + z2 * (1.0 / 1260.0 + z2 * (-1.0 / 1680.0 + z2 / 1188.0)))) / z;
        }
    }

    double ln_gamma(double x)
    {
        if (!(x > 0.0) || !std::isfinite(x))
            throw DomainError("ln_gamma: argument must be positive and finite");
        if (x < 0.5)
        {
            // reflection
            const double s = std::sin(std::numbers::pi * x);
            return std::log(std::numbers::pi / std::abs(s)) - lanczos_ln_gamma(1.0 - x);
        }
        return lanczos_ln_gamma(x);
    }

    double ln_gamma_ratio(double x, double d)
    {
        if (!(x > 0.0) || !(x + d > 0.0))
            throw DomainError("ln_gamma_ratio: arguments must be positive");
        if (d == 0.0)
            return 0.0;
        double shift_sum = 0.0;
        double y = x;
        const double threshold = 15.0;
        while (std::min(y, y + d) < threshold)
        {
            shift_sum += std::log1p(d / y);
            y += 1.0;
        }
        const double main = (y - 0.5) * std::log1p(d / y) + d * std::log(y + d) - d;
        return main + (stirling_tail(y + d) - stirling_tail(y)) - shift_sum;
    }

    double beta_fn(double x, double y)
    {
        if (!(x > 0.0) || !(y > 0.0))
            throw DomainError("beta_fn: arguments must be positive");
        const double big = std::max(x, y), small = std::min(x, y);
        return std::exp(ln_gamma(small) - ln_gamma_ratio(big, small));
    }

    double gauss_2f1(double a, double b, double c, double z)
    {
        if (c <= 0.0 && c == std::floor(c))
            throw DomainError("gauss_2f1: c must not be a nonpositive integer");
        if (!(z >= 0.0 && z < 1.0))
            throw DomainError("gauss_2f1: argument must lie in [0, 1)");
        double sum = 1.0, term = 1.0;
        for (int n = 0; n < 1000000; ++n)
        {
            const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
            term *= ratio;
            sum += term;
            if (term == 0.0 || (std::abs(term) < 1e-15 * std::abs(sum) && std::abs(ratio) < 1.0))
                return sum;
        }
        throw DomainError("gauss_2f1: series did not converge");
    }
}
