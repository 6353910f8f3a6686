// SPDX-License-Identifier: Apache-2.0
#include "raqmimo/physics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "raqmimo/constants.hpp"
#include "raqmimo/errors.hpp"
#include "raqmimo/linalg.hpp"

namespace raqmimo {

namespace {

constexpr double kTopRowTolerance = 1e-8;
constexpr double kMaxCondition = 1e14;

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("AtomicSystem: ") + name + " must be strictly positive");
    }
}

// d H / d Omega_LO,m for a real Rabi frequency.
MatrixXc hamiltonian_derivative(int levels, int band)
{
    MatrixXc dh = MatrixXc::Zero(levels, levels);
    dh(2, band + 3) = 0.5;
    dh(band + 3, 2) = 0.5;
    return dh;
}

// Householder vector v with Q = I - 2 v v^T / (v^T v) mapping e_1 onto the
// normalized vec(I).
VectorXd trace_reflector(int levels)
{
    const int dim = levels * levels;
    VectorXd v = VectorXd::Zero(dim);
    for (int j = 0; j < levels; ++j) v[j * levels + j] = -1.0 / std::sqrt(static_cast<double>(levels));
    v[0] += 1.0;
    return v;
}

// Q^T A Q for the reflector Q, applied as two rank-one updates.
MatrixXc reflect_both_sides(const MatrixXc& a, const VectorXd& v)
{
    const double vv = v.squaredNorm();
    if (vv == 0.0) return a;
    const VectorXc vc = v.cast<Complex>() * std::sqrt(2.0 / vv);
    MatrixXc b = a;
    b.noalias() -= vc * (vc.transpose() * a);
    const VectorXc bv = b * vc;
    b.noalias() -= bv * vc.transpose();
    return b;
}

// -i (I kron H - H^T kron I), the superoperator of rho -> -i [H, rho] on the
// column-stacked vec(rho), filled entry by entry.
MatrixXc commutator_superop(const MatrixXc& h)
{
    const auto n = h.rows();
    const Complex minus_i(0.0, -1.0);
    MatrixXc s = MatrixXc::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index i = 0; i < n; ++i) {
                s(j * n + i, j * n + k) += minus_i * h(i, k);
                s(k * n + i, j * n + i) -= minus_i * h(j, k);
            }
        }
    }
    return s;
}

// Q^T (dA0 / dOmega_LO,m) Q depends only on the level count, so it is built
// once per thread and reused.
const std::vector<MatrixXc>& reflected_derivatives(int levels)
{
    thread_local std::vector<std::vector<MatrixXc>> cache;
    if (static_cast<int>(cache.size()) <= levels) cache.resize(static_cast<std::size_t>(levels) + 1);
    auto& blocks = cache[static_cast<std::size_t>(levels)];
    if (blocks.empty()) {
        const VectorXd reflector = trace_reflector(levels);
        for (int m = 0; m < levels - 3; ++m) {
            blocks.push_back(reflect_both_sides(commutator_superop(hamiltonian_derivative(levels, m)), reflector));
        }
    }
    return blocks;
}

}  // namespace

void AtomicSystem::validate() const
{
    if (num_bands < 1) throw std::invalid_argument("AtomicSystem: num_bands must be >= 1");
    const auto m = static_cast<Eigen::Index>(num_bands);
    if (delta_rf.size() != m) throw std::invalid_argument("AtomicSystem: delta_rf length must equal num_bands");
    if (gamma.size() != m + 2) throw std::invalid_argument("AtomicSystem: gamma length must equal num_bands + 2");
    if (mu_rf.size() != m) throw std::invalid_argument("AtomicSystem: mu_rf length must equal num_bands");
    require_positive(omega_p, "omega_p");
    // Omega_c = 0 is allowed: it decouples the Rydberg manifold and leaves the
    // probe transition as a driven two-level system.
    if (!(omega_c >= 0.0) || !std::isfinite(omega_c)) {
        throw std::invalid_argument("AtomicSystem: omega_c must be finite and non-negative");
    }
    for (Eigen::Index i = 0; i < gamma.size(); ++i) require_positive(gamma[i], "gamma");
    for (Eigen::Index i = 0; i < mu_rf.size(); ++i) require_positive(mu_rf[i], "mu_rf");
    require_positive(mu_12, "mu_12");
    require_positive(n0, "n0");
    require_positive(lambda_p, "lambda_p");
    require_positive(cell_length, "cell_length");
    require_positive(i_ph0, "i_ph0");
    require_positive(temperature, "temperature");
    if (!std::isfinite(delta_p) || !std::isfinite(delta_c) || !delta_rf.allFinite()) {
        throw std::invalid_argument("AtomicSystem: detunings must be finite");
    }
}

AtomicSystem reference_dual_band_system()
{
    using constants::two_pi;
    AtomicSystem s;
    s.num_bands = 2;
    s.omega_p = two_pi * 8.08e6;
    s.omega_c = two_pi * 2.05e6;
    s.delta_p = two_pi * 20.0;
    s.delta_c = two_pi * -30.0;
    s.delta_rf = VectorXd{{two_pi * 10.0, two_pi * 20.0}};
    s.gamma = VectorXd{{two_pi * 5.2e6, two_pi * 3.9e3, two_pi * 1.7e3, two_pi * 1.6e3}};
    // 47D5/2 -> 48P3/2 (6.938 GHz) and 47D5/2 -> 45F7/2 (31.793 GHz).
    s.mu_rf = VectorXd{{1400.0 * constants::e_a0, 1700.0 * constants::e_a0}};
    s.mu_12 = 3.797e-29;  // Cs D2 reduced dipole, 4.4786 e a0
    s.n0 = 4.89e16;
    s.lambda_p = 852.347e-9;
    s.cell_length = 0.02;
    s.i_ph0 = 10e-6;
    s.temperature = 300.0;
    return s;
}

AtomicSystem reference_single_band_system()
{
    AtomicSystem s = reference_dual_band_system();
    s.num_bands = 1;
    s.delta_rf = s.delta_rf.head(1).eval();
    s.gamma = s.gamma.head(3).eval();
    s.mu_rf = s.mu_rf.head(1).eval();
    return s;
}

void LOConfig::validate(int num_bands) const
{
    if (e_lo.size() != num_bands) throw std::invalid_argument("LOConfig: e_lo length must equal num_bands");
    if (!(e_lo_min >= 0.0)) throw std::invalid_argument("LOConfig: e_lo_min must be non-negative");
    for (Eigen::Index i = 0; i < e_lo.size(); ++i) {
        if (!(e_lo[i] >= e_lo_min) || !std::isfinite(e_lo[i])) {
            throw std::invalid_argument("LOConfig: every e_lo entry must be finite and >= e_lo_min");
        }
    }
}

MatrixXc build_hamiltonian(const AtomicSystem& system, const VectorXc& omega_rf)
{
    const int m_bands = system.num_bands;
    if (m_bands < 1 || omega_rf.size() != m_bands || system.delta_rf.size() != m_bands) {
        throw std::invalid_argument("build_hamiltonian: omega_rf and delta_rf must have num_bands entries");
    }
    const int n = system.levels();
    MatrixXc h = MatrixXc::Zero(n, n);
    h(0, 1) = h(1, 0) = 0.5 * system.omega_p;
    h(1, 2) = h(2, 1) = 0.5 * system.omega_c;
    h(1, 1) = -system.delta_p;
    double detuning = -system.delta_p - system.delta_c;
    h(2, 2) = detuning;
    for (int m = 0; m < m_bands; ++m) {
        detuning -= system.delta_rf[m];
        h(m + 3, m + 3) = detuning;
        h(2, m + 3) = 0.5 * std::conj(omega_rf[m]);
        h(m + 3, 2) = 0.5 * omega_rf[m];
    }
    return h;
}

VectorXd lo_rabi_frequencies(const AtomicSystem& system, const LOConfig& lo)
{
    return (system.mu_rf.array() * lo.e_lo.array() / constants::hbar).matrix();
}

MatrixXc build_generator(const AtomicSystem& system, const MatrixXc& h0)
{
    const int n = system.levels();
    if (h0.rows() != n || h0.cols() != n) {
        throw std::invalid_argument("build_generator: Hamiltonian must be (M+3)x(M+3)");
    }
    if (system.gamma.size() != n - 1) {
        throw std::invalid_argument("build_generator: gamma must have M+2 entries");
    }
    VectorXd decay = VectorXd::Zero(n);
    decay.tail(n - 1) = system.gamma;

    // Decay of every density-matrix entry, -(g_i + g_j) / 2 on rho_ij.
    MatrixXc a0 = commutator_superop(h0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) a0(j * n + i, j * n + i) -= 0.5 * (decay[i] + decay[j]);
    }

    // Population feeding: |2> -> |1>, |3> -> |2>, |m+3> -> |1>.
    auto diag_index = [n](int level) { return level * n + level; };
    a0(diag_index(0), diag_index(1)) += system.gamma[0];
    a0(diag_index(1), diag_index(2)) += system.gamma[1];
    for (int m = 0; m < system.num_bands; ++m) {
        a0(diag_index(0), diag_index(m + 3)) += system.gamma[m + 2];
    }
    return a0;
}

MatrixXd trace_basis(int levels)
{
    if (levels < 1) throw std::invalid_argument("trace_basis: levels must be positive");
    const int dim = levels * levels;
    const VectorXd v = trace_reflector(levels);
    MatrixXd q = MatrixXd::Identity(dim, dim);
    const double vv = v.squaredNorm();
    if (vv > 0.0) q -= (2.0 / vv) * v * v.transpose();
    return q;
}

ReducedGenerator reduce_generator(const MatrixXc& a0)
{
    const auto dim = a0.rows();
    const auto levels = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
    if (a0.cols() != dim || static_cast<Eigen::Index>(levels) * levels != dim) {
        throw std::invalid_argument("reduce_generator: generator must be square of size N^2");
    }
    ReducedGenerator out;
    out.q = trace_basis(levels);
    const MatrixXc b = reflect_both_sides(a0, trace_reflector(levels));

    const double scale = std::max(1.0, a0.cwiseAbs().rowwise().sum().maxCoeff());
    if (b.row(0).cwiseAbs().maxCoeff() > kTopRowTolerance * scale) {
        throw ModelInconsistencyError("reduce_generator: generator is not trace preserving");
    }
    out.c0 = b.bottomRightCorner(dim - 1, dim - 1);
    out.w0 = b.bottomLeftCorner(dim - 1, 1);
    return out;
}

SteadyStateSolution solve_steady_state(const AtomicSystem& system, const LOConfig& lo, bool with_second_derivatives)
{
    system.validate();
    lo.validate(system.num_bands);

    const int n = system.levels();
    const int m_bands = system.num_bands;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    const VectorXd omega_lo = lo_rabi_frequencies(system, lo);
    const MatrixXc h0 = build_hamiltonian(system, omega_lo.cast<Complex>());
    const MatrixXc a0 = build_generator(system, h0);
    const ReducedGenerator red = reduce_generator(a0);
    const std::vector<MatrixXc>& reflected = reflected_derivatives(n);
    const VectorXc q_row1 = red.q.row(1).tail(n * n - 1).transpose().cast<Complex>();

    const Eigen::PartialPivLU<MatrixXc> lu(red.c0);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / kMaxCondition)) {
        throw DegenerateOperatingPointError("solve_steady_state: reduced generator is singular at this LO point");
    }

    SteadyStateSolution ss;
    ss.condition_estimate = 1.0 / rcond;
    ss.z = lu.solve(-red.w0 * inv_sqrt_n);

    VectorXc x(n * n);
    x[0] = inv_sqrt_n;
    x.tail(n * n - 1) = ss.z;
    x = red.q.cast<Complex>() * x;
    ss.rho = linalg::unvec(x, n);
    ss.rho21 = ss.rho(1, 0);
    const double a0_norm = a0.cwiseAbs().rowwise().sum().maxCoeff();
    ss.residual = (a0 * x).cwiseAbs().maxCoeff() / (a0_norm > 0.0 ? a0_norm : 1.0);

    // C0 and w0 are linear in each Omega_LO,m, so their derivatives are
    // constant blocks of Q^T (dA0/dOmega_m) Q.
    std::vector<MatrixXc> dc(m_bands);
    std::vector<VectorXc> dz(m_bands);
    ss.d_rho21 = VectorXc::Zero(m_bands);
    const VectorXd field_to_rabi = system.mu_rf / constants::hbar;
    for (int m = 0; m < m_bands; ++m) {
        const MatrixXc& db = reflected[static_cast<std::size_t>(m)];
        dc[m] = db.bottomRightCorner(n * n - 1, n * n - 1);
        const VectorXc dw = db.bottomLeftCorner(n * n - 1, 1);
        dz[m] = -lu.solve(dc[m] * ss.z + dw * inv_sqrt_n);
        ss.d_rho21[m] = (q_row1.transpose() * dz[m]).value() * field_to_rabi[m];
    }

    ss.d2_rho21 = MatrixXc::Zero(m_bands, m_bands);
    if (with_second_derivatives) {
        for (int m = 0; m < m_bands; ++m) {
            for (int k = m; k < m_bands; ++k) {
                const VectorXc d2z = -lu.solve(dc[k] * dz[m] + dc[m] * dz[k]);
                const Complex v = (q_row1.transpose() * d2z).value() * field_to_rabi[m] * field_to_rabi[k];
                ss.d2_rho21(m, k) = v;
                ss.d2_rho21(k, m) = v;
            }
        }
    }
    return ss;
}

double absorption_prefactor(const AtomicSystem& system)
{
    const double k_p = constants::two_pi / system.lambda_p;
    return 2.0 * k_p * system.n0 * system.mu_12 * system.mu_12 /
           (constants::epsilon0 * constants::hbar * system.omega_p);
}

double probe_transmission(const AtomicSystem& system, const SteadyStateSolution& ss)
{
    return std::exp(system.cell_length * absorption_prefactor(system) * ss.rho21.imag());
}

double probe_transmission(const AtomicSystem& system, const LOConfig& lo)
{
    return probe_transmission(system, solve_steady_state(system, lo, false));
}

double photocurrent(const AtomicSystem& system, const SteadyStateSolution& ss)
{
    return system.i_ph0 * probe_transmission(system, ss);
}

QuantumGains transconductances(const AtomicSystem& system, const SteadyStateSolution& ss)
{
    const int m_bands = system.num_bands;
    const double pref = absorption_prefactor(system);
    const double i_ph = photocurrent(system, ss);
    // d rho21 / d Omega_m * mu_m / (2 hbar) equals half the field derivative.
    const VectorXd d_im = ss.d_rho21.imag();

    QuantumGains gains;
    gains.g_q = 0.5 * i_ph * pref * d_im;
    gains.j_q = MatrixXd::Zero(m_bands, m_bands);
    for (int m = 0; m < m_bands; ++m) {
        for (int k = 0; k < m_bands; ++k) {
            gains.j_q(m, k) = 0.5 * i_ph * pref *
                              (ss.d2_rho21(m, k).imag() + system.cell_length * pref * d_im[m] * d_im[k]);
        }
    }
    return gains;
}

QuantumGains transconductances(const AtomicSystem& system, const LOConfig& lo)
{
    return transconductances(system, solve_steady_state(system, lo, true));
}

VectorXd transconductance_values(const AtomicSystem& system, const LOConfig& lo)
{
    const SteadyStateSolution ss = solve_steady_state(system, lo, false);
    return 0.5 * photocurrent(system, ss) * absorption_prefactor(system) * ss.d_rho21.imag();
}

}  // namespace raqmimo
