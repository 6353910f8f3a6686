// SPDX-License-Identifier: Apache-2.0
// Per-band signal conversion, blackbody-radiation (BBR) and electronic
// noise covariances, received-signal covariances and spectral efficiency.
#pragma once

#include <string>
#include <vector>

#include "raqmimo/types.hpp"

namespace raqmimo {

struct Scenario;
struct TransceiverState;

struct BandFrontEnd {
    double f_c{0.0};          // carrier [Hz]
    double bandwidth{0.0};    // RF bandwidth BW_m [Hz]
    double v_ref{0.0};        // ADC reference voltage [V]
    double r_t{0.0};          // TIA transimpedance [Ohm]
    double k_c{0.0};          // current dividing coefficient
    double cell_length{0.0};  // [m]
    double bw_if{0.0};        // optical IF bandwidth [Hz]

    double lambda_c() const;
    void validate() const;
};

/// Front end of the reference setup at carrier f_c (BW_m = BW_IF = 100 kHz).
BandFrontEnd reference_front_end(double f_c);

/// Transimpedance-stage parameters used to estimate the electronic noise.
struct TiaParameters {
    double v_n{2.8e-9};     // input-referred voltage noise [V/sqrt(Hz)]
    double i_n{1.8e-12};    // input-referred current noise [A/sqrt(Hz)]
    double r_t{10e3};       // [Ohm]
    double r_s{1e3};        // photodiode bias resistor [Ohm]
    double z_in{60.0};      // [Ohm]
    double z_out{50.0};     // [Ohm]
    double bw_if{100e3};    // [Hz]
    double v_ref{1e-3};     // [V]
    double temperature{300.0};
};

/// Current divider between the bias resistor and the TIA input, R_s / (R_s + Z_in).
double current_dividing_coefficient(const TiaParameters& tia);

/// Approximate electronic noise variance in ADC units.
///
/// Current noise density at the TIA input
///   i^2 = I_n^2 + (V_n / R_s)^2 + K_c^2 * 4 k_B T / R_s
/// (amplifier current noise, amplifier voltage noise across the bias
/// resistor, bias-resistor Johnson noise through the divider) is scaled by
/// R_T / (2 V_ref) and integrated over BW_IF. The output impedance only loads
/// the next stage and is ignored. Treat the result as an order-of-magnitude
/// budget.
double electronic_noise_variance(const TiaParameters& tia);

enum class CorrelationKind { Identity, IsotropicSinc, Custom };

const char* to_string(CorrelationKind kind);
CorrelationKind correlation_kind_from_string(const std::string& name);

struct NoiseModel {
    double sigma_e2{0.0};
    double temperature{300.0};
    VectorXd zeta;                // BBR coherence factor per band
    std::vector<MatrixXc> c_hat;  // normalized BBR correlation per band
    CorrelationKind correlation_kind{CorrelationKind::Identity};
    double element_spacing{0.0};  // [m], used by IsotropicSinc

    void validate(int num_bands, int n_r) const;
};

MatrixXc identity_correlation(int n_r);

/// Uniform linear array in an isotropic field: [C]_ij = sinc(2 pi d |i-j| / lambda).
MatrixXc isotropic_sinc_correlation(int n_r, double spacing, double lambda);

/// Fill noise.c_hat for every band according to noise.correlation_kind.
void build_correlations(NoiseModel& noise, const std::vector<BandFrontEnd>& front_ends, int n_r);

/// C_sig,m = R_T K_c L sqrt(8 pi eta0 / lambda_c^2) / (2 V_ref)  [Ohm / sqrt(W)].
double signal_coefficient(const BandFrontEnd& front_end);

/// E|E_bbr,z|^2 = 16 pi eta0 k_B T / (3 lambda^2)  [(V/m)^2 / Hz].
double bbr_field_variance(double temperature, double lambda);

/// Square of the incident-power-to-field coefficient, 2 eta0 / A_e with A_e = lambda^2 / (4 pi).
double field_conversion_squared(double lambda);

/// (4/3) k_B T BW zeta, the BBR power scale including the image sideband [W].
double bbr_power(double temperature, double bandwidth, double zeta);

MatrixXc bbr_covariance(const BandFrontEnd& front_end, double temperature, double zeta, const MatrixXc& c_hat);
MatrixXc bbr_covariance(const BandFrontEnd& front_end, const NoiseModel& noise, int band, int n_r);

/// sigma_e^2 I + sum_m (g_m C_sig,m)^2 C_q,m.
MatrixXc total_noise_covariance(const VectorXd& g_q, const VectorXd& c_sig, const std::vector<MatrixXc>& c_q,
                                double sigma_e2, int n_r);

/// Sum over users of band m of H V V^H H^H.
MatrixXc band_signal_covariance(const TransceiverState& state, const Scenario& scenario, int band);

/// SDMA: R_y, shared by every band. FDMA: R_m = C_tot / M + (g_m C_m)^2 S_m.
MatrixXc received_covariance(const TransceiverState& state, const Scenario& scenario, Scheme scheme, int band);

MatrixXc received_covariance_sdma(const TransceiverState& state, const Scenario& scenario);

/// R - (g_m C_m)^2 H_mk V_mk V_mk^H H_mk^H.
MatrixXc interference_covariance(const TransceiverState& state, const Scenario& scenario, Scheme scheme, int band,
                                 int user);

/// log2 det(I + R_mk^-1 (gC)^2 H V V^H H^H). `regularized` flags a ridge-regularized solve.
double user_se(const TransceiverState& state, const Scenario& scenario, Scheme scheme, int band, int user,
               bool* regularized = nullptr);

double user_se_sdma(const TransceiverState& state, const Scenario& scenario, int band, int user);

/// (1/M) sum_{m,k} alpha_mk SE_mk.
double weighted_se(const TransceiverState& state, const Scenario& scenario, Scheme scheme);

/// Unweighted throughput [bit/s]. SDMA users occupy BW_IF each, FDMA users BW_IF / M.
double sum_rate(const TransceiverState& state, const Scenario& scenario, Scheme scheme);

}  // namespace raqmimo
