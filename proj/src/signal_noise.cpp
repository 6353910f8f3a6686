// SPDX-License-Identifier: Apache-2.0
#include "raqmimo/signal_noise.hpp"

#include <cmath>
#include <stdexcept>

#include "raqmimo/constants.hpp"
#include "raqmimo/linalg.hpp"
#include "raqmimo/model.hpp"

namespace raqmimo {

double BandFrontEnd::lambda_c() const { return constants::c0 / f_c; }

void BandFrontEnd::validate() const
{
    for (double v : {f_c, bandwidth, v_ref, r_t, k_c, cell_length, bw_if}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("BandFrontEnd: all parameters must be strictly positive");
        }
    }
    if (bandwidth > bw_if) throw std::invalid_argument("BandFrontEnd: bandwidth must not exceed bw_if");
}

BandFrontEnd reference_front_end(double f_c)
{
    const TiaParameters tia;
    BandFrontEnd fe;
    fe.f_c = f_c;
    fe.bandwidth = tia.bw_if;
    fe.v_ref = tia.v_ref;
    fe.r_t = tia.r_t;
    fe.k_c = current_dividing_coefficient(tia);
    fe.cell_length = 0.02;
    fe.bw_if = tia.bw_if;
    return fe;
}

double current_dividing_coefficient(const TiaParameters& tia) { return tia.r_s / (tia.r_s + tia.z_in); }

double electronic_noise_variance(const TiaParameters& tia)
{
    const double k_c = current_dividing_coefficient(tia);
    const double v_over_r = tia.v_n / tia.r_s;
    const double johnson = 4.0 * constants::k_b * tia.temperature / tia.r_s;
    const double i2 = tia.i_n * tia.i_n + v_over_r * v_over_r + k_c * k_c * johnson;
    const double gain = tia.r_t / (2.0 * tia.v_ref);
    return gain * gain * i2 * tia.bw_if;
}

const char* to_string(CorrelationKind kind)
{
    switch (kind) {
    case CorrelationKind::Identity: return "identity";
    case CorrelationKind::IsotropicSinc: return "isotropic-sinc";
    case CorrelationKind::Custom: return "custom";
    }
    return "identity";
}

CorrelationKind correlation_kind_from_string(const std::string& name)
{
    if (name == "identity") return CorrelationKind::Identity;
    if (name == "isotropic-sinc") return CorrelationKind::IsotropicSinc;
    if (name == "custom") return CorrelationKind::Custom;
    throw std::invalid_argument("unknown correlation kind: " + name);
}

void NoiseModel::validate(int num_bands, int n_r) const
{
    if (!(sigma_e2 >= 0.0)) throw std::invalid_argument("NoiseModel: sigma_e2 must be non-negative");
    if (!(temperature >= 0.0)) throw std::invalid_argument("NoiseModel: temperature must be non-negative");
    if (zeta.size() != num_bands || !(zeta.array() > 0.0).all()) {
        throw std::invalid_argument("NoiseModel: zeta needs one positive entry per band");
    }
    if (static_cast<int>(c_hat.size()) != num_bands) {
        throw std::invalid_argument("NoiseModel: c_hat needs one matrix per band");
    }
    for (const auto& c : c_hat) {
        if (c.rows() != n_r || c.cols() != n_r) throw std::invalid_argument("NoiseModel: c_hat must be N_r x N_r");
        if (linalg::hermitian_defect(c) > 1e-12) throw std::invalid_argument("NoiseModel: c_hat must be Hermitian");
        if ((c.diagonal().array() - Complex(1.0, 0.0)).abs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("NoiseModel: c_hat must have a unit diagonal");
        }
        if (linalg::min_eigenvalue(c) < -1e-10 * n_r) {
            throw std::invalid_argument("NoiseModel: c_hat must be positive semidefinite");
        }
    }
}

MatrixXc identity_correlation(int n_r) { return MatrixXc::Identity(n_r, n_r); }

MatrixXc isotropic_sinc_correlation(int n_r, double spacing, double lambda)
{
    if (!(spacing >= 0.0) || !(lambda > 0.0)) {
        throw std::invalid_argument("isotropic_sinc_correlation: spacing >= 0 and lambda > 0 required");
    }
    MatrixXc c(n_r, n_r);
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_r; ++j) {
            const double x = constants::two_pi * spacing * std::abs(i - j) / lambda;
            c(i, j) = (x == 0.0) ? 1.0 : std::sin(x) / x;
        }
    }
    return c;
}

void build_correlations(NoiseModel& noise, const std::vector<BandFrontEnd>& front_ends, int n_r)
{
    if (noise.correlation_kind == CorrelationKind::Custom) return;
    noise.c_hat.clear();
    for (const auto& fe : front_ends) {
        noise.c_hat.push_back(noise.correlation_kind == CorrelationKind::Identity
                                  ? identity_correlation(n_r)
                                  : isotropic_sinc_correlation(n_r, noise.element_spacing, fe.lambda_c()));
    }
}

double signal_coefficient(const BandFrontEnd& fe)
{
    const double lambda = fe.lambda_c();
    return (1.0 / (2.0 * fe.v_ref)) * fe.r_t * fe.k_c * fe.cell_length *
           std::sqrt(8.0 * constants::pi * constants::eta0 / (lambda * lambda));
}

double bbr_field_variance(double temperature, double lambda)
{
    return 16.0 * constants::pi * constants::eta0 * constants::k_b * temperature / (3.0 * lambda * lambda);
}

double field_conversion_squared(double lambda)
{
    const double effective_area = lambda * lambda / (4.0 * constants::pi);
    return 2.0 * constants::eta0 / effective_area;
}

double bbr_power(double temperature, double bandwidth, double zeta)
{
    return (4.0 / 3.0) * constants::k_b * temperature * bandwidth * zeta;
}

MatrixXc bbr_covariance(const BandFrontEnd& fe, double temperature, double zeta, const MatrixXc& c_hat)
{
    return bbr_power(temperature, fe.bandwidth, zeta) * c_hat;
}

MatrixXc bbr_covariance(const BandFrontEnd& fe, const NoiseModel& noise, int band, int n_r)
{
    const auto& c = noise.c_hat.at(static_cast<std::size_t>(band));
    if (c.rows() != n_r) throw std::invalid_argument("bbr_covariance: c_hat size does not match n_r");
    return bbr_covariance(fe, noise.temperature, noise.zeta[band], c);
}

MatrixXc total_noise_covariance(const VectorXd& g_q, const VectorXd& c_sig, const std::vector<MatrixXc>& c_q,
                                double sigma_e2, int n_r)
{
    if (g_q.size() != c_sig.size() || static_cast<std::size_t>(g_q.size()) != c_q.size()) {
        throw std::invalid_argument("total_noise_covariance: per-band inputs must have equal length");
    }
    MatrixXc c = sigma_e2 * MatrixXc::Identity(n_r, n_r);
    for (Eigen::Index m = 0; m < g_q.size(); ++m) {
        const double gc = g_q[m] * c_sig[m];
        c += (gc * gc) * c_q[static_cast<std::size_t>(m)];
    }
    return c;
}

MatrixXc band_signal_covariance(const TransceiverState& state, const Scenario& sc, int band)
{
    MatrixXc s = MatrixXc::Zero(sc.n_r, sc.n_r);
    for (int k = 0; k < sc.num_users; ++k) {
        const auto i = static_cast<std::size_t>(sc.index(band, k));
        const MatrixXc hv = sc.channels[i] * state.v[i];
        s.noalias() += hv * hv.adjoint();
    }
    return s;
}

MatrixXc received_covariance(const TransceiverState& state, const Scenario& sc, Scheme scheme, int band)
{
    const VectorXd& g = state.gains.g_q;
    const double noise_share = scheme == Scheme::SDMA ? 1.0 : static_cast<double>(sc.num_bands);
    MatrixXc r = total_noise_covariance(g, sc.c_sig, sc.c_q, sc.noise.sigma_e2, sc.n_r) / noise_share;
    for (int m = 0; m < sc.num_bands; ++m) {
        if (scheme == Scheme::FDMA && m != band) continue;
        const double gc = g[m] * sc.c_sig[m];
        r += (gc * gc) * band_signal_covariance(state, sc, m);
    }
    return linalg::hermitian_part(r);
}

MatrixXc received_covariance_sdma(const TransceiverState& state, const Scenario& sc)
{
    return received_covariance(state, sc, Scheme::SDMA, 0);
}

MatrixXc interference_covariance(const TransceiverState& state, const Scenario& sc, Scheme scheme, int band, int user)
{
    const auto i = static_cast<std::size_t>(sc.index(band, user));
    const double gc = state.gains.g_q[band] * sc.c_sig[band];
    const MatrixXc hv = sc.channels[i] * state.v[i];
    return linalg::hermitian_part(received_covariance(state, sc, scheme, band) - (gc * gc) * hv * hv.adjoint());
}

double user_se(const TransceiverState& state, const Scenario& sc, Scheme scheme, int band, int user,
               bool* regularized)
{
    const auto i = static_cast<std::size_t>(sc.index(band, user));
    const double gc = state.gains.g_q[band] * sc.c_sig[band];
    const MatrixXc hv = gc * (sc.channels[i] * state.v[i]);
    const MatrixXc r = interference_covariance(state, sc, scheme, band, user);
    const MatrixXc x = linalg::hpd_solve(r, hv, regularized);
    // det(I_Nr + R^-1 h h^H) = det(I_S + h^H R^-1 h)
    const MatrixXc inner = MatrixXc::Identity(hv.cols(), hv.cols()) + hv.adjoint() * x;
    return linalg::logdet_hpd(inner) / std::log(2.0);
}

double user_se_sdma(const TransceiverState& state, const Scenario& sc, int band, int user)
{
    return user_se(state, sc, Scheme::SDMA, band, user);
}

double weighted_se(const TransceiverState& state, const Scenario& sc, Scheme scheme)
{
    double acc = 0.0;
    for (int m = 0; m < sc.num_bands; ++m) {
        for (int k = 0; k < sc.num_users; ++k) {
            const double alpha = sc.weights(m, k);
            if (alpha == 0.0) continue;
            acc += alpha * user_se(state, sc, scheme, m, k);
        }
    }
    return acc / static_cast<double>(sc.num_bands);
}

double sum_rate(const TransceiverState& state, const Scenario& sc, Scheme scheme)
{
    double acc = 0.0;
    const double share = scheme == Scheme::SDMA ? 1.0 : static_cast<double>(sc.num_bands);
    for (int m = 0; m < sc.num_bands; ++m) {
        const double bw = sc.front_ends[static_cast<std::size_t>(m)].bw_if / share;
        for (int k = 0; k < sc.num_users; ++k) acc += bw * user_se(state, sc, scheme, m, k);
    }
    return acc;
}

void Scenario::populate_noise_terms()
{
    c_sig.resize(num_bands);
    c_q.clear();
    for (int m = 0; m < num_bands; ++m) {
        const auto& fe = front_ends.at(static_cast<std::size_t>(m));
        c_sig[m] = signal_coefficient(fe);
        c_q.push_back(bbr_covariance(fe, noise, m, n_r));
    }
}

void Scenario::validate() const
{
    if (num_bands < 1 || num_users < 1 || n_r < 1 || n_t < 1) {
        throw std::invalid_argument("Scenario: band, user and antenna counts must be positive");
    }
    if (static_cast<int>(channels.size()) != num_bands * num_users) {
        throw std::invalid_argument("Scenario: expected one channel per (band, user)");
    }
    for (const auto& h : channels) {
        if (h.rows() != n_r || h.cols() != n_t) throw std::invalid_argument("Scenario: channel must be N_r x N_t");
    }
    if (power_budgets.rows() != num_bands || power_budgets.cols() != num_users ||
        !(power_budgets.array() > 0.0).all()) {
        throw std::invalid_argument("Scenario: power budgets must be positive, M x K");
    }
    if (weights.rows() != num_bands || weights.cols() != num_users || !(weights.array() >= 0.0).all()) {
        throw std::invalid_argument("Scenario: weights must be non-negative, M x K");
    }
    if (c_sig.size() != num_bands || static_cast<int>(c_q.size()) != num_bands) {
        throw std::invalid_argument("Scenario: noise terms not populated");
    }
    if (fixed_gains) {
        if (fixed_gains->size() != num_bands) throw std::invalid_argument("Scenario: fixed_gains length mismatch");
    } else {
        if (atomic.num_bands != num_bands) throw std::invalid_argument("Scenario: atomic system band count mismatch");
        if (static_cast<int>(front_ends.size()) != num_bands) {
            throw std::invalid_argument("Scenario: expected one front end per band");
        }
        atomic.validate();
        for (const auto& fe : front_ends) fe.validate();
        noise.validate(num_bands, n_r);
    }
}

}  // namespace raqmimo
