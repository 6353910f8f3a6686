// SPDX-License-Identifier: Apache-2.0
// Random uplink channels, classical-array baselines and Monte Carlo campaigns
// over transmit-power sweeps.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "raqmimo/model.hpp"
#include "raqmimo/wmmse.hpp"

namespace raqmimo {

enum class Fading {
    IidRayleigh,
    // Every small-scale coefficient equals 1; only the pathloss remains.
    Deterministic,
};

enum class PathlossLaw { FreeSpace, Exponent };

const char* to_string(Fading fading);
Fading fading_from_string(const std::string& name);
const char* to_string(PathlossLaw law);
PathlossLaw pathloss_from_string(const std::string& name);

struct ChannelModel {
    Fading fading{Fading::IidRayleigh};
    double d_min{500.0};  // [m]
    double d_max{1500.0};
    PathlossLaw pathloss{PathlossLaw::FreeSpace};
    double exponent{2.0};  // used by PathlossLaw::Exponent
    std::uint64_t seed{1};

    void validate() const;
};

/// Large-scale amplitude gain at distance d and carrier f_c.
/// Free space: lambda / (4 pi d). Exponent model: (lambda / 4 pi) d^(-n/2),
/// which coincides with free space at n = 2.
double pathloss_amplitude(const ChannelModel& model, double distance, double f_c);

MatrixXc sample_channel(const ChannelModel& model, int n_r, int n_t, double f_c, std::mt19937_64& rng);

/// Symmetric coupling with geometric decay, C_ij = rho^|i-j|, rows scaled to
/// unit Euclidean norm so that coupling redistributes rather than adds power.
MatrixXc coupling_matrix(int n, Complex rho);

struct ClassicalReceiver {
    double temperature{300.0};
    double noise_figure_db{3.0};
    double bandwidth{100e3};  // [Hz]
};

/// Standard WMMSE for a classical array serving all M*K users in a single
/// band: unit conversion gain, external thermal noise k T B coupled through
/// C, internal noise k T B (F - 1) added after the coupling, effective
/// channels C H. Weights are scaled by 1 / M so that the reported WSE is
/// normalized like the quantum schemes. Throws std::invalid_argument when the
/// coupling matrix is singular.
TransceiverState classical_baseline_solve(const Scenario& scenario, const std::optional<MatrixXc>& coupling,
                                          const ClassicalReceiver& receiver, const SolverConfig& config,
                                          Scenario* classical_out = nullptr);

enum class SchemeId { QSdmaOpt, QSdmaNoOpt, QFdmaOpt, QFdmaNoOpt, CSdmaMc, CSdmaNoMc };

const char* to_string(SchemeId scheme);
SchemeId scheme_id_from_string(const std::string& name);
std::vector<SchemeId> all_schemes();

struct CampaignConfig {
    int num_trials{100};
    std::vector<double> power_grid;  // [W], per-user budget P_max
    std::vector<SchemeId> schemes{all_schemes()};
    // 0: RAQMIMO_THREADS if set, otherwise the hardware concurrency.
    int threads{0};

    void validate() const;
};

/// Everything needed to instantiate the scenario of one trial.
struct ScenarioTemplate {
    int num_bands{2};
    int num_users{3};
    int n_r{5};
    int n_t{4};
    AtomicSystem atomic;
    std::vector<BandFrontEnd> front_ends;
    NoiseModel noise;
    double e_lo_min{3e-3};
    ChannelModel channel;
    SolverConfig solver;
    ClassicalReceiver classical;
    Complex coupling_rho{0.3, 0.0};

    void validate() const;
};

/// Dual-band reference setup with the documented defaults.
ScenarioTemplate reference_template();

/// Scenario of trial `trial` at per-user power `power`. Channels depend only
/// on (channel seed, trial), so every scheme and power point of a trial sees
/// the same draw.
Scenario make_trial_scenario(const ScenarioTemplate& tmpl, int trial, double power);

/// Seed of the initial precoders of a trial, shared by all schemes.
std::uint64_t trial_init_seed(const ScenarioTemplate& tmpl, int trial);

struct TrialRow {
    double power{0.0};
    SchemeId scheme{SchemeId::QSdmaOpt};
    int trial{0};
    bool ok{false};
    std::string error;
    double wse{0.0};
    double sum_rate{0.0};
    int iterations{0};
    bool converged{false};
    VectorXd g_q;
    VectorXd e_lo;
};

struct AggregateRow {
    double power{0.0};
    SchemeId scheme{SchemeId::QSdmaOpt};
    int num_ok{0};
    int num_failed{0};
    int num_not_converged{0};
    double wse_mean{0.0};
    double wse_std{0.0};
    double sum_rate_mean{0.0};
    double sum_rate_std{0.0};
    double iterations_mean{0.0};
};

struct CampaignResult {
    std::vector<TrialRow> rows;  // ordered by power, trial, scheme
    std::vector<AggregateRow> aggregates;
    int num_failed() const;
};

/// Run one scheme on one trial scenario; exceptions propagate.
TrialRow run_trial(const ScenarioTemplate& tmpl, SchemeId scheme, int trial, double power);

CampaignResult run_campaign(const CampaignConfig& config, const ScenarioTemplate& tmpl);

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows, const CampaignConfig& config);

/// Worker count from RAQMIMO_THREADS, falling back to the hardware concurrency.
int default_thread_count();

}  // namespace raqmimo
