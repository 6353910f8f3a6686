// SPDX-License-Identifier: Apache-2.0
// Multi-band ladder-system model of a Rydberg vapor cell: Hamiltonian,
// Lindblad generator, reduced steady-state solve, and the transconductance
// and Jacobian derived from it.
//
// Levels are |1> ground, |2> intermediate, |3> first Rydberg state and
// |m+3> for the M RF-coupled Rydberg states. All rates are angular
// frequencies in rad/s.
#pragma once

#include "raqmimo/types.hpp"

namespace raqmimo {

struct AtomicSystem {
    int num_bands{1};
    double omega_p{0.0};
    double omega_c{0.0};
    double delta_p{0.0};
    double delta_c{0.0};
    VectorXd delta_rf;  // length M
    VectorXd gamma;     // decay rates of |2> ... |M+3>, length M+2
    VectorXd mu_rf;     // |3> <-> |m+3> transition dipoles [C m], length M
    double mu_12{0.0};  // [C m]
    double n0{0.0};     // atomic density [m^-3]
    double lambda_p{0.0};
    double cell_length{0.0};
    // Photocurrent at unit probe transmission [A]. The operating-point
    // photocurrent is i_ph0 * T_p(E_LO).
    double i_ph0{0.0};
    double temperature{0.0};

    int levels() const { return num_bands + 3; }

    /// Throws std::invalid_argument on the first violated invariant.
    void validate() const;
};

/// Dual-band Cs reference system. Rates, density, cell length and
/// temperature follow a typical vapor-cell setup; the dipoles, probe
/// wavelength and photocurrent are standard Cs magnitudes chosen here.
AtomicSystem reference_dual_band_system();

/// Same ladder truncated to the first RF band (four levels).
AtomicSystem reference_single_band_system();

struct LOConfig {
    VectorXd e_lo;         // [V/m]
    double e_lo_min{0.0};  // [V/m]

    void validate(int num_bands) const;
};

struct SteadyStateSolution {
    MatrixXc rho;
    VectorXc z;
    Complex rho21;
    VectorXc d_rho21;   // d rho21 / d E_LO,m  [m/V]
    MatrixXc d2_rho21;  // d^2 rho21 / d E_LO,m d E_LO,n  [m^2/V^2]
    double residual{0.0};
    double condition_estimate{0.0};
};

struct QuantumGains {
    VectorXd g_q;  // [S]
    MatrixXd j_q;  // [S m / V], j_q(m, n) = d g_q[m] / d E_LO,n
};

struct ReducedGenerator {
    MatrixXd q;   // orthogonal, first column is the normalized vec(I)
    MatrixXc c0;  // lower-right block of Q^T A0 Q
    VectorXc w0;  // lower-left column of Q^T A0 Q
};

MatrixXc build_hamiltonian(const AtomicSystem& system, const VectorXc& omega_rf);

/// Rabi frequencies of the LO tones, mu_rf[m] * E_LO,m / hbar.
VectorXd lo_rabi_frequencies(const AtomicSystem& system, const LOConfig& lo);

/// Liouvillian acting on column-stacked density matrices.
MatrixXc build_generator(const AtomicSystem& system, const MatrixXc& h0);

/// Deterministic orthogonal basis whose first column is vec(I)/sqrt(N).
/// Uses the Householder reflector that maps e_1 onto that vector.
MatrixXd trace_basis(int levels);

ReducedGenerator reduce_generator(const MatrixXc& a0);

/// Steady state with first and second derivatives of rho21 w.r.t. E_LO.
/// `with_second_derivatives = false` skips the M^2 second-order solves.
SteadyStateSolution solve_steady_state(const AtomicSystem& system, const LOConfig& lo,
                                       bool with_second_derivatives = true);

/// 2 k_p N0 mu12^2 / (eps0 hbar Omega_p) [m^-1].
double absorption_prefactor(const AtomicSystem& system);

/// Probe transmission exp(L * prefactor * Im rho21). Model-dependent:
/// with this Hamiltonian's sign convention absorption gives Im rho21 < 0.
double probe_transmission(const AtomicSystem& system, const SteadyStateSolution& ss);
double probe_transmission(const AtomicSystem& system, const LOConfig& lo);

/// Operating-point photocurrent i_ph0 * T_p.
double photocurrent(const AtomicSystem& system, const SteadyStateSolution& ss);

QuantumGains transconductances(const AtomicSystem& system, const SteadyStateSolution& ss);
QuantumGains transconductances(const AtomicSystem& system, const LOConfig& lo);

/// g_q only (no Jacobian); used inside line searches.
VectorXd transconductance_values(const AtomicSystem& system, const LOConfig& lo);

}  // namespace raqmimo
