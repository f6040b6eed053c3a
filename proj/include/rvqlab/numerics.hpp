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

#ifndef RVQLAB_NUMERICS_HPP
#define RVQLAB_NUMERICS_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rvqlab
{
    using cplx = std::complex<double>;
    using CVector = std::vector<cplx>;

    // Dense complex matrix, row-major storage
    class ComplexMatrix
    {
    public:
        ComplexMatrix() = default;
        ComplexMatrix(std::size_t rows, std::size_t cols);
        ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

        static ComplexMatrix identity(std::size_t n);
        static ComplexMatrix diagonal(std::span<const double> d);
        static ComplexMatrix diagonal(std::initializer_list<double> d);

        std::size_t rows() const noexcept { return rows_; }
        std::size_t cols() const noexcept { return cols_; }
        bool empty() const noexcept { return entries_.empty(); }

        cplx &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
        const cplx &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
        const std::vector<cplx> &entries() const noexcept { return entries_; }

        ComplexMatrix adjoint() const;
        CVector column(std::size_t c) const;
        CVector apply(std::span<const cplx> v) const; // M v
        double frobenius_norm() const;
        double trace_real() const;
        bool is_square() const noexcept { return rows_ == cols_; }

        // Max entry deviation of M - M^H, relative to the Frobenius norm
        double hermitian_defect() const;

        ComplexMatrix &operator+=(const ComplexMatrix &rhs);
        ComplexMatrix &operator-=(const ComplexMatrix &rhs);
        ComplexMatrix &operator*=(cplx s);

    private:
        std::size_t rows_ = 0, cols_ = 0;
        std::vector<cplx> entries_;
    };

    ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
    ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
    ComplexMatrix operator*(cplx s, ComplexMatrix a);

    // A^H B without forming the adjoint
    ComplexMatrix adjoint_times(const ComplexMatrix &a, const ComplexMatrix &b);

    double norm2(std::span<const cplx> v);
    cplx inner(std::span<const cplx> a, std::span<const cplx> b); // a^H b
    double quadratic_form(const ComplexMatrix &m, std::span<const cplx> v); // Re(v^H M v)

    // Nonincreasing, nonnegative eigenvalues (squared singular values)
    class EigenSpectrum
    {
    public:
        EigenSpectrum() = default;
        // Sorts descending; clamps values in [-tol, 0) to zero, throws DomainError below that
        explicit EigenSpectrum(std::vector<double> values, double clamp_tol = 1e-12);
        EigenSpectrum(std::initializer_list<double> values);

        std::size_t size() const noexcept { return values_.size(); }
        double operator[](std::size_t i) const { return values_[i]; }
        double front() const { return values_.front(); }
        double back() const { return values_.back(); }
        double sum() const;
        const std::vector<double> &values() const noexcept { return values_; }
        EigenSpectrum scaled(double c) const;

    private:
        std::vector<double> values_;
    };

    struct HermitianEigen
    {
        std::vector<double> values; // descending, may be negative for indefinite input
        ComplexMatrix vectors;      // columns are unit eigenvectors

        // Eigenvalues as a spectrum; tiny negatives clamped relative to the largest magnitude
        EigenSpectrum spectrum() const;
    };

    // Cyclic complex Jacobi. Throws PreconditionError for non-square, non-Hermitian or n > 64.
    HermitianEigen hermitian_eig(const ComplexMatrix &m);

    double ln_gamma(double x);
    // ln Gamma(x + d) - ln Gamma(x), accurate when d is small relative to x
    double ln_gamma_ratio(double x, double d);
    double beta_fn(double x, double y);
    double gauss_2f1(double a, double b, double c, double z);
}

#endif
