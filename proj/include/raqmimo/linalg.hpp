// SPDX-License-Identifier: Apache-2.0
// Small dense helpers shared by the physics and transceiver modules.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "raqmimo/errors.hpp"
#include "raqmimo/types.hpp"

namespace raqmimo::linalg {

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& a)
{
    using Plain = typename Derived::PlainObject;
    Plain out = (a + a.adjoint()) * typename Derived::RealScalar(0.5);
    return out;
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    using Scalar = typename DerivedA::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Column-stacking vectorization, matching Eigen's default storage order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& a)
{
    typename Derived::PlainObject tmp = a;
    return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(tmp.data(), tmp.size());
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unvec(const Eigen::MatrixBase<Derived>& x,
                                                                               Eigen::Index rows)
{
    if (rows <= 0 || x.size() % rows != 0) {
        throw std::invalid_argument("unvec: length is not a multiple of the row count");
    }
    typename Derived::PlainObject tmp = x;
    return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(
        tmp.data(), rows, x.size() / rows);
}

/// log det of a Hermitian positive definite matrix via Cholesky.
/// Throws NumericalDegeneracyError when the factorization fails.
template <typename Derived>
double logdet_hpd(const Eigen::MatrixBase<Derived>& a)
{
    Eigen::LLT<typename Derived::PlainObject> llt(hermitian_part(a));
    if (llt.info() != Eigen::Success) {
        throw NumericalDegeneracyError("logdet_hpd: matrix is not positive definite");
    }
    double acc = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        const double d = std::real(l(i, i));
        if (!(d > 0.0)) throw NumericalDegeneracyError("logdet_hpd: non-positive pivot");
        acc += 2.0 * std::log(d);
    }
    return acc;
}

/// Smallest eigenvalue of the Hermitian part.
template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& a)
{
    Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a)
{
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Solve R X = B for Hermitian positive (semi)definite R.
/// Adds a ridge of 1e-12 * trace(R) / n when the Cholesky factorization
/// fails; `regularized` reports whether that happened.
MatrixXc hpd_solve(const MatrixXc& r, const MatrixXc& b, bool* regularized = nullptr);

MatrixXc hpd_inverse(const MatrixXc& r, bool* regularized = nullptr);

}  // namespace raqmimo::linalg
