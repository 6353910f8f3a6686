// SPDX-License-Identifier: Apache-2.0
#include "raqmimo/linalg.hpp"

namespace raqmimo::linalg {

MatrixXc hpd_solve(const MatrixXc& r, const MatrixXc& b, bool* regularized)
{
    if (r.rows() != r.cols() || r.rows() != b.rows()) {
        throw std::invalid_argument("hpd_solve: dimension mismatch");
    }
    const MatrixXc rh = hermitian_part(r);
    Eigen::LLT<MatrixXc> llt(rh);
    if (llt.info() == Eigen::Success) {
        if (regularized) *regularized = false;
        return llt.solve(b);
    }
    const auto n = static_cast<double>(r.rows());
    const double ridge = 1e-12 * std::abs(rh.trace().real()) / n;
    MatrixXc reg = rh;
    reg.diagonal().array() += ridge;
    Eigen::LDLT<MatrixXc> ldlt(reg);
    if (ldlt.info() != Eigen::Success) {
        throw NumericalDegeneracyError("hpd_solve: covariance is singular even after regularization");
    }
    if (regularized) *regularized = true;
    return ldlt.solve(b);
}

MatrixXc hpd_inverse(const MatrixXc& r, bool* regularized)
{
    return hermitian_part(hpd_solve(r, MatrixXc::Identity(r.rows(), r.cols()), regularized));
}

}  // namespace raqmimo::linalg
