// SPDX-License-Identifier: Apache-2.0
// Reference computations used by the tests. Nothing here calls into the
// solver paths it is meant to check.
#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "raqmimo/constants.hpp"
#include "raqmimo/physics.hpp"
#include "raqmimo/types.hpp"

namespace oracle {

using raqmimo::Complex;
using raqmimo::MatrixXc;
using raqmimo::MatrixXd;
using raqmimo::VectorXc;
using raqmimo::VectorXd;

/// Ladder Hamiltonian written out element by element.
inline MatrixXc hamiltonian(const raqmimo::AtomicSystem& s, const VectorXd& e_lo)
{
    const int n = s.num_bands + 3;
    MatrixXc h = MatrixXc::Zero(n, n);
    h(0, 1) = h(1, 0) = s.omega_p / 2.0;
    h(1, 2) = h(2, 1) = s.omega_c / 2.0;
    h(1, 1) = -s.delta_p;
    h(2, 2) = -s.delta_p - s.delta_c;
    double detuning = -s.delta_p - s.delta_c;
    for (int m = 0; m < s.num_bands; ++m) {
        detuning -= s.delta_rf[m];
        const double omega = s.mu_rf[m] * e_lo[m] / raqmimo::constants::hbar;
        h(m + 3, m + 3) = detuning;
        h(2, m + 3) = h(m + 3, 2) = omega / 2.0;
    }
    return h;
}

/// Lindblad superoperator assembled column by column from its action on the
/// matrix units, with jump operators sqrt(g)|target><source| for the decays
/// 2->1, 3->2 and (m+3)->1. Column-stacked vectorization.
inline MatrixXc lindblad_superoperator(const raqmimo::AtomicSystem& s, const VectorXd& e_lo)
{
    const int n = s.num_bands + 3;
    const MatrixXc h = hamiltonian(s, e_lo);
    std::vector<MatrixXc> jumps;
    auto jump = [&](int target, int source, double rate) {
        MatrixXc l = MatrixXc::Zero(n, n);
        l(target, source) = std::sqrt(rate);
        jumps.push_back(l);
    };
    jump(0, 1, s.gamma[0]);
    jump(1, 2, s.gamma[1]);
    for (int m = 0; m < s.num_bands; ++m) jump(0, m + 3, s.gamma[2 + m]);

    const Complex i1(0.0, 1.0);
    MatrixXc sup(n * n, n * n);
    for (int col = 0; col < n; ++col) {
        for (int row = 0; row < n; ++row) {
            MatrixXc e = MatrixXc::Zero(n, n);
            e(row, col) = 1.0;
            MatrixXc out = -i1 * (h * e - e * h);
            for (const auto& l : jumps) {
                const MatrixXc ll = l.adjoint() * l;
                out += l * e * l.adjoint() - 0.5 * (ll * e + e * ll);
            }
            sup.col(col * n + row) = Eigen::Map<const VectorXc>(out.data(), n * n);
        }
    }
    return sup;
}

/// Steady state from the right singular vector of the smallest singular
/// value, normalized to unit trace.
inline MatrixXc nullspace_steady_state(const MatrixXc& a0)
{
    const int nn = static_cast<int>(a0.rows());
    const int n = static_cast<int>(std::lround(std::sqrt(nn)));
    Eigen::JacobiSVD<MatrixXc> svd(a0, Eigen::ComputeFullV);
    const VectorXc v = svd.matrixV().col(nn - 1);
    MatrixXc rho = Eigen::Map<const MatrixXc>(v.data(), n, n);
    rho /= rho.trace();
    return rho;
}

/// rho_21 of a driven two-level atom with H = [[0, W/2], [W/2, -D]] and
/// decay g from the upper level.
inline Complex two_level_rho21(double omega, double delta, double gamma)
{
    return omega * Complex(2.0 * delta, -gamma) / (gamma * gamma + 4.0 * delta * delta + 2.0 * omega * omega);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Random ladder system with parameters spread around the reference values.
inline raqmimo::AtomicSystem random_system(int bands, std::mt19937_64& rng)
{
    using raqmimo::constants::two_pi;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto range = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    raqmimo::AtomicSystem s = raqmimo::reference_dual_band_system();
    s.num_bands = bands;
    s.omega_p = two_pi * range(1e6, 20e6);
    s.omega_c = two_pi * range(0.5e6, 10e6);
    s.delta_p = two_pi * range(-2e6, 2e6);
    s.delta_c = two_pi * range(-2e6, 2e6);
    s.delta_rf.resize(bands);
    s.mu_rf.resize(bands);
    s.gamma.resize(bands + 2);
    s.gamma[0] = two_pi * range(3e6, 8e6);
    s.gamma[1] = two_pi * range(1e3, 10e3);
    for (int m = 0; m < bands; ++m) {
        s.delta_rf[m] = two_pi * range(-1e6, 1e6);
        s.mu_rf[m] = range(200.0, 2000.0) * raqmimo::constants::e_a0;
        s.gamma[2 + m] = two_pi * range(0.5e3, 10e3);
    }
    return s;
}

inline VectorXd random_fields(int bands, double lo, double hi, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(lo, hi);
    VectorXd e(bands);
    for (int m = 0; m < bands; ++m) e[m] = u(rng);
    return e;
}

}  // namespace oracle
