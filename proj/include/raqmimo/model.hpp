// SPDX-License-Identifier: Apache-2.0
// Uplink scenario and transceiver state shared by the noise model and the
// optimizer.
#pragma once

#include <optional>
#include <vector>

#include "raqmimo/physics.hpp"
#include "raqmimo/signal_noise.hpp"
#include "raqmimo/types.hpp"

namespace raqmimo {

struct Scenario {
    int num_bands{0};
    int num_users{0};
    int n_r{0};
    int n_t{0};
    MatrixList channels;    // H_mk, N_r x N_t, index m * K + k
    MatrixXd power_budgets;  // M x K [W]
    MatrixXd weights;        // M x K
    std::vector<BandFrontEnd> front_ends;
    NoiseModel noise;
    AtomicSystem atomic;
    double e_lo_min{0.0};

    // Per-band conversion coefficients and BBR covariances. Filled by
    // populate_noise_terms() for quantum receivers; classical baselines set
    // them directly.
    VectorXd c_sig;
    std::vector<MatrixXc> c_q;

    // When set, gains are constant (classical receivers) and the LO step is
    // disabled.
    std::optional<VectorXd> fixed_gains;

    int num_streams() const { return std::min(n_t, n_r); }
    int index(int band, int user) const { return band * num_users + user; }
    const MatrixXc& channel(int band, int user) const { return channels[static_cast<std::size_t>(index(band, user))]; }

    void populate_noise_terms();
    void validate() const;
};

struct IterationRecord {
    int iteration{0};
    double f_q{0.0};
    double wse{0.0};
    VectorXd g_q;
    VectorXd e_lo;
};

struct TransceiverState {
    MatrixList v;  // N_t x S
    MatrixList u;  // N_r x S
    MatrixList w;  // S x S
    LOConfig lo;
    QuantumGains gains;
    std::vector<double> objective_trace;
    std::vector<double> se_trace;
    std::vector<IterationRecord> history;
    // f_q after each block update (U, W, V, LO) when recording is enabled.
    std::vector<double> block_trace;
    double initial_wse{0.0};
    int iterations{0};
    bool converged{false};
    bool regularized{false};
};

}  // namespace raqmimo
