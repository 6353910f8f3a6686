// SPDX-License-Identifier: Apache-2.0
#include "raqmimo/wmmse.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "raqmimo/errors.hpp"
#include "raqmimo/linalg.hpp"

namespace raqmimo {

namespace {

constexpr int kMaxBracketDoublings = 200;
constexpr int kMaxBisectionSteps = 2000;
const double kInvLn2 = 1.0 / std::log(2.0);

double band_gain(const TransceiverState& state, const Scenario& sc, int band)
{
    return state.gains.g_q[band] * sc.c_sig[band];
}

// sum alpha U W U^H over the users whose MSE depends on band `band`'s
// precoders: every user for SDMA, the users of the same band for FDMA.
MatrixXc weighted_combiner_gram(const TransceiverState& state, const Scenario& sc, Scheme scheme, int band)
{
    MatrixXc f = MatrixXc::Zero(sc.n_r, sc.n_r);
    for (int m = 0; m < sc.num_bands; ++m) {
        if (scheme == Scheme::FDMA && m != band) continue;
        for (int k = 0; k < sc.num_users; ++k) {
            const double alpha = sc.weights(m, k);
            if (alpha == 0.0) continue;
            const auto i = static_cast<std::size_t>(sc.index(m, k));
            f.noalias() += alpha * state.u[i] * state.w[i] * state.u[i].adjoint();
        }
    }
    return linalg::hermitian_part(f);
}

VectorXd projected_gradient(const VectorXd& grad, const LOConfig& lo)
{
    VectorXd pg = grad;
    for (Eigen::Index i = 0; i < pg.size(); ++i) {
        if (lo.e_lo[i] <= lo.e_lo_min && pg[i] > 0.0) pg[i] = 0.0;
    }
    return pg;
}

std::vector<double> weight_logdets(const TransceiverState& state)
{
    std::vector<double> out;
    out.reserve(state.w.size());
    for (const auto& w : state.w) out.push_back(linalg::logdet_hpd(w));
    return out;
}

}  // namespace

MatrixXc mse_matrix(const TransceiverState& state, const Scenario& sc, int band, int user, Scheme scheme)
{
    const auto i = static_cast<std::size_t>(sc.index(band, user));
    const double gc = band_gain(state, sc, band);
    const MatrixXc& u = state.u[i];
    const MatrixXc cross = gc * (u.adjoint() * sc.channels[i] * state.v[i]);
    const MatrixXc r = received_covariance(state, sc, scheme, band);
    MatrixXc e = MatrixXc::Identity(cross.rows(), cross.cols()) - cross - cross.adjoint() + u.adjoint() * r * u;
    return linalg::hermitian_part(e);
}

MatrixList update_combiners(const TransceiverState& state, const Scenario& sc, Scheme scheme, bool* regularized)
{
    MatrixList out(state.v.size());
    bool any_reg = false;
    for (int m = 0; m < sc.num_bands; ++m) {
        const MatrixXc r = received_covariance(state, sc, scheme, m);
        const double gc = band_gain(state, sc, m);
        for (int k = 0; k < sc.num_users; ++k) {
            const auto i = static_cast<std::size_t>(sc.index(m, k));
            bool reg = false;
            out[i] = gc * linalg::hpd_solve(r, sc.channels[i] * state.v[i], &reg);
            any_reg = any_reg || reg;
        }
    }
    if (regularized) *regularized = any_reg;
    return out;
}

MatrixList update_weights(const TransceiverState& state, const Scenario& sc, Scheme /*scheme*/)
{
    MatrixList out(state.v.size());
    for (int m = 0; m < sc.num_bands; ++m) {
        const double gc = band_gain(state, sc, m);
        for (int k = 0; k < sc.num_users; ++k) {
            const auto i = static_cast<std::size_t>(sc.index(m, k));
            const MatrixXc a = MatrixXc::Identity(state.v[i].cols(), state.v[i].cols()) -
                               gc * (state.u[i].adjoint() * sc.channels[i] * state.v[i]);
            Eigen::PartialPivLU<MatrixXc> lu(a);
            if (!(lu.rcond() > 1e-15)) {
                throw NumericalDegeneracyError("update_weights: I - gC U^H H V is not invertible");
            }
            out[i] = linalg::hermitian_part(lu.inverse());
        }
    }
    return out;
}

PrecoderUpdate update_precoders(const TransceiverState& state, const Scenario& sc, Scheme scheme, double bisection_tol)
{
    PrecoderUpdate out;
    out.v.resize(state.v.size());
    out.mu = VectorXd::Zero(static_cast<Eigen::Index>(state.v.size()));
    const int s = sc.num_streams();

    for (int m = 0; m < sc.num_bands; ++m) {
        const MatrixXc f = weighted_combiner_gram(state, sc, scheme, m);
        const double gc = band_gain(state, sc, m);
        for (int k = 0; k < sc.num_users; ++k) {
            const auto i = static_cast<std::size_t>(sc.index(m, k));
            const MatrixXc& h = sc.channels[i];
            const double alpha = sc.weights(m, k);
            const double budget = sc.power_budgets(m, k);
            const MatrixXc g = alpha * gc * (h.adjoint() * state.u[i] * state.w[i]);
            if (alpha == 0.0 || g.squaredNorm() == 0.0) {
                out.v[i] = MatrixXc::Zero(sc.n_t, s);
                continue;
            }
            const MatrixXc b = linalg::hermitian_part(MatrixXc((gc * gc) * (h.adjoint() * f * h)));
            Eigen::SelfAdjointEigenSolver<MatrixXc> es(b);
            const VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
            const MatrixXc gamma = es.eigenvectors().adjoint() * g;
            const VectorXd weight = gamma.rowwise().squaredNorm();

            auto power = [&](double mu) {
                double p = 0.0;
                for (Eigen::Index j = 0; j < lambda.size(); ++j) {
                    if (weight[j] == 0.0) continue;
                    const double d = lambda[j] + mu;
                    if (d <= 0.0) return std::numeric_limits<double>::infinity();
                    p += weight[j] / (d * d);
                }
                return p;
            };
            auto precoder = [&](double mu) {
                VectorXc scale = (lambda.array() + mu).inverse().matrix().cast<Complex>();
                for (Eigen::Index j = 0; j < lambda.size(); ++j) {
                    if (weight[j] == 0.0) scale[j] = 0.0;
                }
                return MatrixXc(es.eigenvectors() * scale.asDiagonal() * gamma);
            };

            const double lambda_max = lambda.maxCoeff();
            const bool invertible = lambda.minCoeff() > 1e-13 * lambda_max;
            if (invertible && power(0.0) <= budget) {
                out.v[i] = precoder(0.0);
                continue;
            }

            double lo = 0.0;
            double hi = 1.0;
            int doublings = 0;
            while (power(hi) > budget) {
                lo = hi;
                hi *= 2.0;
                if (++doublings > kMaxBracketDoublings) {
                    throw OptimizerFailure("update_precoders: could not bracket the power multiplier");
                }
            }
            for (int step = 0; step < kMaxBisectionSteps; ++step) {
                if (std::abs(power(hi) - budget) <= bisection_tol * budget) break;
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (power(mid) > budget) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.v[i] = precoder(hi);
            out.mu[static_cast<Eigen::Index>(i)] = hi;
        }
    }
    return out;
}

double objective_fq(const TransceiverState& state, const Scenario& sc, Scheme scheme)
{
    double acc = 0.0;
    for (int m = 0; m < sc.num_bands; ++m) {
        for (int k = 0; k < sc.num_users; ++k) {
            const double alpha = sc.weights(m, k);
            if (alpha == 0.0) continue;
            const auto i = static_cast<std::size_t>(sc.index(m, k));
            const MatrixXc e = mse_matrix(state, sc, m, k, scheme);
            acc += alpha * ((state.w[i] * e).trace().real() - linalg::logdet_hpd(state.w[i]));
        }
    }
    return acc * kInvLn2;
}

VectorXd grad_fq_wrt_gq(const TransceiverState& state, const Scenario& sc, Scheme scheme)
{
    const int bands = sc.num_bands;
    const double share = scheme == Scheme::SDMA ? 1.0 : static_cast<double>(bands);
    std::vector<MatrixXc> signal(static_cast<std::size_t>(bands));
    for (int l = 0; l < bands; ++l) signal[static_cast<std::size_t>(l)] = band_signal_covariance(state, sc, l);

    VectorXd grad = VectorXd::Zero(bands);
    for (int l = 0; l < bands; ++l) {
        const double c = sc.c_sig[l];
        const double scale = 2.0 * state.gains.g_q[l] * c * c;
        const auto li = static_cast<std::size_t>(l);
        for (int m = 0; m < bands; ++m) {
            // dR/dg_l as seen by the users of band m.
            MatrixXc dr = (scale / share) * sc.c_q[li];
            if (scheme == Scheme::SDMA || m == l) dr += scale * signal[li];
            for (int k = 0; k < sc.num_users; ++k) {
                const double alpha = sc.weights(m, k);
                if (alpha == 0.0) continue;
                const auto i = static_cast<std::size_t>(sc.index(m, k));
                const MatrixXc& u = state.u[i];
                MatrixXc de = u.adjoint() * dr * u;
                if (m == l) {
                    const MatrixXc cross = u.adjoint() * sc.channels[i] * state.v[i];
                    de -= sc.c_sig[m] * (cross + cross.adjoint());
                }
                grad[l] += alpha * (state.w[i] * de).trace().real();
            }
        }
    }
    return grad * kInvLn2;
}

VectorXd grad_fq_wrt_lo(const TransceiverState& state, const Scenario& sc, Scheme scheme)
{
    return state.gains.j_q.transpose() * grad_fq_wrt_gq(state, sc, scheme);
}

LOStepResult lo_gradient_step(const TransceiverState& state, const Scenario& sc, Scheme scheme,
                              const ArmijoParams& armijo)
{
    LOStepResult res;
    res.lo = state.lo;
    res.g_q = state.gains.g_q;
    res.f_before = objective_fq(state, sc, scheme);
    res.f_after = res.f_before;
    if (sc.fixed_gains) return res;

    res.projected_gradient = projected_gradient(grad_fq_wrt_lo(state, sc, scheme), state.lo);
    const double pg_norm2 = res.projected_gradient.squaredNorm();
    if (!(pg_norm2 > 0.0) || !std::isfinite(pg_norm2)) return res;

    TransceiverState trial = state;
    double t = armijo.initial_step_fraction * state.lo.e_lo.minCoeff() / std::sqrt(pg_norm2);
    for (int b = 0; b <= armijo.max_backtracks; ++b, t *= armijo.shrink) {
        trial.lo.e_lo = (state.lo.e_lo - t * res.projected_gradient).cwiseMax(state.lo.e_lo_min);
        VectorXd g;
        try {
            g = transconductance_values(sc.atomic, trial.lo);
        } catch (const DegenerateOperatingPointError&) {
            continue;
        }
        trial.gains.g_q = g;
        const double f = objective_fq(trial, sc, scheme);
        if (f <= res.f_before - armijo.c * t * pg_norm2) {
            res.lo = trial.lo;
            res.g_q = g;
            res.f_after = f;
            res.step = t;
            res.accepted = true;
            return res;
        }
    }
    return res;
}

MatrixList random_precoders(const Scenario& sc, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int s = sc.num_streams();
    MatrixList out;
    out.reserve(static_cast<std::size_t>(sc.num_bands * sc.num_users));
    for (int m = 0; m < sc.num_bands; ++m) {
        for (int k = 0; k < sc.num_users; ++k) {
            MatrixXc v(sc.n_t, s);
            for (Eigen::Index c = 0; c < v.cols(); ++c) {
                for (Eigen::Index r = 0; r < v.rows(); ++r) v(r, c) = Complex(normal(rng), normal(rng));
            }
            v *= std::sqrt(sc.power_budgets(m, k) / v.squaredNorm());
            out.push_back(std::move(v));
        }
    }
    return out;
}

TransceiverState initial_state(const Scenario& sc, const SolverConfig& config)
{
    sc.validate();
    TransceiverState state;
    const int s = sc.num_streams();
    state.v = random_precoders(sc, config.seed);
    state.u.assign(state.v.size(), MatrixXc::Zero(sc.n_r, s));
    state.w.assign(state.v.size(), MatrixXc::Identity(s, s));
    state.lo.e_lo_min = sc.e_lo_min;
    if (sc.fixed_gains) {
        state.lo.e_lo = VectorXd::Zero(sc.num_bands);
        state.gains.g_q = *sc.fixed_gains;
        state.gains.j_q = MatrixXd::Zero(sc.num_bands, sc.num_bands);
    } else {
        state.lo.e_lo = config.initial_e_lo.size() == 0 ? VectorXd::Constant(sc.num_bands, 10e-3)
                                                        : config.initial_e_lo;
        state.lo.validate(sc.num_bands);
        state.gains = transconductances(sc.atomic, state.lo);
    }
    state.initial_wse = weighted_se(state, sc, config.scheme);
    return state;
}

TransceiverState qwmmse_continue(const Scenario& sc, const SolverConfig& config, TransceiverState state)
{
    const Scheme scheme = config.scheme;
    const bool lo_enabled = config.optimize_lo && !sc.fixed_gains;
    const int start = state.iterations;
    state.converged = false;
    // LO point at which gains and Jacobian were last evaluated; empty forces
    // a refresh on the first pass.
    VectorXd gains_at;

    for (int it = start + 1; it <= start + config.max_iterations; ++it) {
        const std::vector<double> previous = weight_logdets(state);

        if (!sc.fixed_gains && (gains_at.size() == 0 || gains_at != state.lo.e_lo)) {
            state.gains = transconductances(sc.atomic, state.lo);
            gains_at = state.lo.e_lo;
        }
        if (config.record_blocks) state.block_trace.push_back(objective_fq(state, sc, scheme));

        bool reg = false;
        state.u = update_combiners(state, sc, scheme, &reg);
        state.regularized = state.regularized || reg;
        if (config.record_blocks) state.block_trace.push_back(objective_fq(state, sc, scheme));

        state.w = update_weights(state, sc, scheme);
        if (config.record_blocks) state.block_trace.push_back(objective_fq(state, sc, scheme));

        state.v = update_precoders(state, sc, scheme, config.bisection_tol).v;
        if (config.record_blocks) state.block_trace.push_back(objective_fq(state, sc, scheme));

        double f = 0.0;
        if (lo_enabled) {
            const LOStepResult step = lo_gradient_step(state, sc, scheme, config.armijo);
            state.lo = step.lo;
            state.gains.g_q = step.g_q;
            f = step.f_after;
        } else {
            f = objective_fq(state, sc, scheme);
        }
        if (config.record_blocks) state.block_trace.push_back(f);

        state.iterations = it;
        const double wse = weighted_se(state, sc, scheme);
        state.objective_trace.push_back(f);
        state.se_trace.push_back(wse);
        state.history.push_back({it, f, wse, state.gains.g_q, state.lo.e_lo});

        const std::vector<double> current = weight_logdets(state);
        double change = 0.0;
        for (std::size_t i = 0; i < current.size(); ++i) change += std::abs(current[i] - previous[i]);
        if (change <= config.epsilon) {
            state.converged = true;
            break;
        }
    }
    return state;
}

TransceiverState qwmmse_solve(const Scenario& sc, const SolverConfig& config)
{
    return qwmmse_continue(sc, config, initial_state(sc, config));
}

}  // namespace raqmimo
