// SPDX-License-Identifier: Apache-2.0
// Quantum-aware weighted-MMSE transceiver optimization: block coordinate
// descent over combiners, MSE weights and precoders, plus a projected
// Armijo step on the LO field amplitudes.
#pragma once

#include <cstdint>

#include "raqmimo/model.hpp"

namespace raqmimo {

struct ArmijoParams {
    double c{1e-4};
    double shrink{0.5};
    int max_backtracks{40};
    // First trial moves a_LO by this fraction of min(a_LO), in Euclidean norm.
    double initial_step_fraction{0.1};
};

struct SolverConfig {
    Scheme scheme{Scheme::SDMA};
    double epsilon{1e-3};
    int max_iterations{500};
    double bisection_tol{1e-12};
    ArmijoParams armijo;
    bool optimize_lo{true};
    VectorXd initial_e_lo;  // empty: 10 mV/m on every band
    std::uint64_t seed{1};
    bool record_blocks{false};
};

struct PrecoderUpdate {
    MatrixList v;
    VectorXd mu;  // Lagrange multiplier per (band, user)
};

struct LOStepResult {
    LOConfig lo;
    VectorXd g_q;
    VectorXd projected_gradient;
    double f_before{0.0};
    double f_after{0.0};
    double step{0.0};
    bool accepted{false};
};

/// I - gC U^H H V - gC V^H H^H U + U^H R U, R per scheme.
MatrixXc mse_matrix(const TransceiverState& state, const Scenario& scenario, int band, int user, Scheme scheme);

/// LMMSE combiners gC R^-1 H V.
MatrixList update_combiners(const TransceiverState& state, const Scenario& scenario, Scheme scheme,
                            bool* regularized = nullptr);

/// (I - gC U^H H V)^-1 using the combiners stored in `state`.
MatrixList update_weights(const TransceiverState& state, const Scenario& scenario, Scheme scheme);

/// Closed-form precoders with the power multiplier found by bisection.
PrecoderUpdate update_precoders(const TransceiverState& state, const Scenario& scenario, Scheme scheme,
                                double bisection_tol);

/// (1/ln 2) sum alpha (tr(W E) - ln det W).
double objective_fq(const TransceiverState& state, const Scenario& scenario, Scheme scheme);

/// d f_q / d g_q with U, V, W held fixed.
VectorXd grad_fq_wrt_gq(const TransceiverState& state, const Scenario& scenario, Scheme scheme);

/// Chain rule through the quantum Jacobian: J_q^T * grad_g.
VectorXd grad_fq_wrt_lo(const TransceiverState& state, const Scenario& scenario, Scheme scheme);

LOStepResult lo_gradient_step(const TransceiverState& state, const Scenario& scenario, Scheme scheme,
                              const ArmijoParams& armijo);

/// Complex Gaussian precoders scaled so that tr(V V^H) = P_mk exactly.
MatrixList random_precoders(const Scenario& scenario, std::uint64_t seed);

/// Random precoders, zero combiners, identity weights, gains at the initial LO.
TransceiverState initial_state(const Scenario& scenario, const SolverConfig& config);

/// Alternating optimization until sum |log det W - log det W'| <= epsilon
/// or the iteration cap; `converged` is false in the latter case.
TransceiverState qwmmse_solve(const Scenario& scenario, const SolverConfig& config);

/// Continue the alternating optimization from an existing state.
TransceiverState qwmmse_continue(const Scenario& scenario, const SolverConfig& config, TransceiverState state);

}  // namespace raqmimo
