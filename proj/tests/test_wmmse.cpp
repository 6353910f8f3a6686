// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "raqmimo/linalg.hpp"
#include "raqmimo/scenario_mc.hpp"
#include "raqmimo/signal_noise.hpp"
#include "raqmimo/wmmse.hpp"

using namespace raqmimo;

namespace {

Scenario trial_scenario(int trial, double power = 1e-3)
{
    return make_trial_scenario(reference_template(), trial, power);
}

SolverConfig config_for(Scheme scheme, std::uint64_t seed = 7)
{
    SolverConfig cfg;
    cfg.scheme = scheme;
    cfg.seed = seed;
    return cfg;
}

// State with MMSE combiners and matching weights for the current precoders.
TransceiverState refreshed(TransceiverState st, const Scenario& sc, Scheme scheme)
{
    st.u = update_combiners(st, sc, scheme);
    st.w = update_weights(st, sc, scheme);
    return st;
}

double weighted_trace_mse(const TransceiverState& st, const Scenario& sc, Scheme scheme)
{
    double acc = 0.0;
    for (int m = 0; m < sc.num_bands; ++m) {
        for (int k = 0; k < sc.num_users; ++k) {
            const auto i = static_cast<std::size_t>(sc.index(m, k));
            acc += sc.weights(m, k) * (st.w[i] * mse_matrix(st, sc, m, k, scheme)).trace().real();
        }
    }
    return acc;
}

MatrixXc random_like(const MatrixXc& a, double norm, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    MatrixXc d(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = Complex(n(rng), n(rng));
    return d * (norm / d.norm());
}

}  // namespace

TEST_CASE("random precoders meet the power budget exactly and depend only on the seed")
{
    const Scenario sc = trial_scenario(0, 2.5e-3);
    const MatrixList a = random_precoders(sc, 11);
    const MatrixList b = random_precoders(sc, 11);
    const MatrixList c = random_precoders(sc, 12);
    REQUIRE(a.size() == 6);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].squaredNorm() == doctest::Approx(2.5e-3).epsilon(1e-14));
        CHECK(a[i].cols() == sc.num_streams());
        CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a[i] - c[i]).cwiseAbs().maxCoeff() > 0.0);
    }
}

TEST_CASE("objective equals weighted log det W once combiners and weights are updated")
{
    for (Scheme scheme : {Scheme::SDMA, Scheme::FDMA}) {
        const Scenario sc = trial_scenario(4);
        const TransceiverState st = refreshed(initial_state(sc, config_for(scheme)), sc, scheme);
        double ref = 0.0;
        for (int m = 0; m < sc.num_bands; ++m) {
            for (int k = 0; k < sc.num_users; ++k) {
                const auto i = static_cast<std::size_t>(sc.index(m, k));
                ref += sc.weights(m, k) * (sc.num_streams() - linalg::logdet_hpd(st.w[i]));
            }
        }
        ref /= std::log(2.0);
        CHECK(objective_fq(st, sc, scheme) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("MMSE combiners minimize the weighted MSE")
{
    std::mt19937_64 rng(5);
    for (Scheme scheme : {Scheme::SDMA, Scheme::FDMA}) {
        const Scenario sc = trial_scenario(5);
        const TransceiverState st = refreshed(initial_state(sc, config_for(scheme)), sc, scheme);
        const double best = weighted_trace_mse(st, sc, scheme);
        for (int r = 0; r < 10; ++r) {
            TransceiverState p = st;
            for (auto& u : p.u) u += random_like(u, 1e-3 * u.norm(), rng);
            CHECK(weighted_trace_mse(p, sc, scheme) >= best - 1e-12 * std::abs(best));
        }
    }
}

TEST_CASE("weights are the inverse MSE matrices at the MMSE combiners")
{
    const Scenario sc = trial_scenario(6);
    const TransceiverState st = refreshed(initial_state(sc, config_for(Scheme::SDMA)), sc, Scheme::SDMA);
    for (int m = 0; m < sc.num_bands; ++m) {
        for (int k = 0; k < sc.num_users; ++k) {
            const auto i = static_cast<std::size_t>(sc.index(m, k));
            const MatrixXc e = mse_matrix(st, sc, m, k, Scheme::SDMA);
            const MatrixXc prod = st.w[i] * e;
            CHECK((prod - MatrixXc::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("precoder update is optimal among feasible perturbations")
{
    std::mt19937_64 rng(8);
    for (Scheme scheme : {Scheme::SDMA, Scheme::FDMA}) {
        const Scenario sc = trial_scenario(8);
        TransceiverState st = refreshed(initial_state(sc, config_for(scheme)), sc, scheme);
        const PrecoderUpdate pu = update_precoders(st, sc, scheme, 1e-12);
        st.v = pu.v;
        const double best = objective_fq(st, sc, scheme);
        for (int r = 0; r < 10; ++r) {
            TransceiverState p = st;
            for (std::size_t i = 0; i < p.v.size(); ++i) {
                p.v[i] += random_like(p.v[i], 1e-2 * p.v[i].norm(), rng);
                const double budget = sc.power_budgets.data()[0];
                if (p.v[i].squaredNorm() > budget) p.v[i] *= std::sqrt(budget / p.v[i].squaredNorm());
            }
            CHECK(objective_fq(p, sc, scheme) >= best - 1e-12 * std::abs(best));
        }
        for (Eigen::Index i = 0; i < pu.mu.size(); ++i) CHECK(pu.mu[i] >= 0.0);
    }
}

TEST_CASE("traces are monotone and the history is consistent")
{
    const Scenario sc = trial_scenario(9);
    SolverConfig cfg = config_for(Scheme::SDMA);
    cfg.record_blocks = true;
    const TransceiverState st = qwmmse_solve(sc, cfg);
    CHECK(st.converged);
    CHECK(st.history.size() == static_cast<std::size_t>(st.iterations));
    CHECK(st.block_trace.size() == 5 * static_cast<std::size_t>(st.iterations));
    for (std::size_t i = 1; i < st.objective_trace.size(); ++i) {
        CHECK(st.objective_trace[i] <= st.objective_trace[i - 1] + 1e-12 * std::abs(st.objective_trace[i - 1]));
        CHECK(st.se_trace[i] >= st.se_trace[i - 1] - 1e-12 * std::abs(st.se_trace[i - 1]));
    }
    CHECK(st.se_trace.front() >= st.initial_wse);
    CHECK(st.history.back().wse == st.se_trace.back());
    CHECK((st.lo.e_lo.array() >= sc.e_lo_min).all());
}

TEST_CASE("a huge tolerance stops after one iteration")
{
    const Scenario sc = trial_scenario(10);
    SolverConfig cfg = config_for(Scheme::FDMA);
    cfg.epsilon = 1e6;
    const TransceiverState st = qwmmse_solve(sc, cfg);
    CHECK(st.iterations == 1);
    CHECK(st.converged);
}

TEST_CASE("iteration cap leaves the run unconverged and continuation resumes the count")
{
    const Scenario sc = trial_scenario(11);
    SolverConfig cfg = config_for(Scheme::SDMA);
    cfg.epsilon = 1e-300;
    cfg.max_iterations = 3;
    TransceiverState st = qwmmse_solve(sc, cfg);
    CHECK_FALSE(st.converged);
    CHECK(st.iterations == 3);
    st = qwmmse_continue(sc, cfg, st);
    CHECK(st.iterations == 6);
    CHECK(st.history.back().iteration == 6);
}

TEST_CASE("solver is deterministic")
{
    const Scenario sc = trial_scenario(12);
    const TransceiverState a = qwmmse_solve(sc, config_for(Scheme::SDMA, 99));
    const TransceiverState b = qwmmse_solve(sc, config_for(Scheme::SDMA, 99));
    REQUIRE(a.iterations == b.iterations);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.lo.e_lo == b.lo.e_lo);
    for (std::size_t i = 0; i < a.v.size(); ++i) CHECK((a.v[i] - b.v[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("LO optimization does not lose to a fixed LO from the same start")
{
    for (int trial = 0; trial < 4; ++trial) {
        const Scenario sc = trial_scenario(20 + trial);
        for (Scheme scheme : {Scheme::SDMA, Scheme::FDMA}) {
            SolverConfig opt = config_for(scheme, 3 + trial);
            SolverConfig fixed = opt;
            fixed.optimize_lo = false;
            const TransceiverState a = qwmmse_solve(sc, opt);
            const TransceiverState b = qwmmse_solve(sc, fixed);
            CHECK(a.se_trace.back() >= b.se_trace.back() - 1e-9);
            CHECK((b.lo.e_lo.array() == 10e-3).all());
        }
    }
}

TEST_CASE("converged precoders are a local optimum of the WSE")
{
    std::mt19937_64 rng(31);
    const Scenario sc = trial_scenario(31);
    SolverConfig cfg = config_for(Scheme::SDMA, 31);
    cfg.optimize_lo = false;
    cfg.epsilon = 1e-12;
    cfg.max_iterations = 5000;
    const TransceiverState st = qwmmse_solve(sc, cfg);
    REQUIRE(st.converged);
    const double wse = weighted_se(st, sc, Scheme::SDMA);
    for (int r = 0; r < 20; ++r) {
        TransceiverState p = st;
        for (std::size_t i = 0; i < p.v.size(); ++i) {
            const double budget = p.v[i].squaredNorm();
            p.v[i] += random_like(p.v[i], 1e-3 * std::sqrt(budget), rng);
            p.v[i] *= std::sqrt(budget / p.v[i].squaredNorm());
        }
        CHECK(weighted_se(p, sc, Scheme::SDMA) <= wse + 1e-8);
    }
}

TEST_CASE("LO step never increases the objective and respects the lower bound")
{
    const Scenario sc = trial_scenario(13);
    SolverConfig cfg = config_for(Scheme::SDMA);
    cfg.max_iterations = 2;
    cfg.optimize_lo = false;
    TransceiverState st = qwmmse_solve(sc, cfg);
    st.lo.e_lo = VectorXd{{sc.e_lo_min, 0.05}};
    st.gains = transconductances(sc.atomic, st.lo);
    const LOStepResult r = lo_gradient_step(st, sc, Scheme::SDMA, ArmijoParams{});
    CHECK(r.f_after <= r.f_before);
    CHECK((r.lo.e_lo.array() >= sc.e_lo_min).all());
    if (r.accepted) {
        CHECK(r.step > 0.0);
        CHECK((r.g_q - transconductance_values(sc.atomic, r.lo)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("fixed gains disable the LO step")
{
    Scenario sc = trial_scenario(14);
    sc.fixed_gains = VectorXd{{-1e-4, -2e-4}};
    const TransceiverState st = qwmmse_solve(sc, config_for(Scheme::SDMA));
    CHECK(st.gains.g_q == *sc.fixed_gains);
    for (const auto& h : st.history) CHECK(h.g_q == *sc.fixed_gains);
    const LOStepResult r = lo_gradient_step(st, sc, Scheme::SDMA, ArmijoParams{});
    CHECK_FALSE(r.accepted);
}
