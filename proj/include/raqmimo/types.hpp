// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace raqmimo {

using Complex = std::complex<double>;

using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// One complex matrix per (band, user) pair, band-major.
using MatrixList = std::vector<MatrixXc>;

enum class Scheme { SDMA, FDMA };

inline const char* to_string(Scheme s) { return s == Scheme::SDMA ? "SDMA" : "FDMA"; }

}  // namespace raqmimo
