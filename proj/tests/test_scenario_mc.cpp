// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "raqmimo/constants.hpp"
#include "raqmimo/scenario_mc.hpp"
#include "raqmimo/signal_noise.hpp"
#include "raqmimo/wmmse.hpp"

using namespace raqmimo;

namespace {

bool same_rows(const std::vector<TrialRow>& a, const std::vector<TrialRow>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].power != b[i].power || a[i].scheme != b[i].scheme || a[i].trial != b[i].trial ||
            a[i].ok != b[i].ok || a[i].wse != b[i].wse || a[i].sum_rate != b[i].sum_rate ||
            a[i].iterations != b[i].iterations || a[i].g_q != b[i].g_q || a[i].e_lo != b[i].e_lo) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("pathloss amplitude")
{
    ChannelModel m;
    const double lambda = constants::c0 / 6.938e9;
    CHECK(pathloss_amplitude(m, 1000.0, 6.938e9) ==
          doctest::Approx(lambda / (4.0 * constants::pi * 1000.0)).epsilon(1e-15));
    m.pathloss = PathlossLaw::Exponent;
    m.exponent = 2.0;
    CHECK(pathloss_amplitude(m, 800.0, 6.938e9) ==
          doctest::Approx(lambda / (4.0 * constants::pi * 800.0)).epsilon(1e-14));
    m.exponent = 3.0;
    CHECK(pathloss_amplitude(m, 800.0, 6.938e9) ==
          doctest::Approx(lambda / (4.0 * constants::pi) * std::pow(800.0, -1.5)).epsilon(1e-14));
}

TEST_CASE("deterministic fading leaves only the pathloss")
{
    ChannelModel m;
    m.fading = Fading::Deterministic;
    m.d_min = m.d_max = 700.0;
    std::mt19937_64 rng(1);
    const MatrixXc h = sample_channel(m, 5, 4, 31.793e9, rng);
    const double beta = pathloss_amplitude(m, 700.0, 31.793e9);
    CHECK((h.cwiseAbs().array() - beta).abs().maxCoeff() == 0.0);
}

TEST_CASE("Rayleigh entries have the pathloss variance")
{
    ChannelModel m;
    m.d_min = m.d_max = 1000.0;
    std::mt19937_64 rng(2);
    const double beta = pathloss_amplitude(m, 1000.0, 6.938e9);
    double acc = 0.0;
    Complex mean = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const Complex h = sample_channel(m, 1, 1, 6.938e9, rng)(0, 0);
        acc += std::norm(h);
        mean += h;
    }
    CHECK(acc / draws == doctest::Approx(beta * beta).epsilon(0.02));
    CHECK(std::abs(mean / double(draws)) < 0.02 * beta);
}

TEST_CASE("same seed gives the same channels")
{
    ScenarioTemplate t = reference_template();
    const Scenario a = make_trial_scenario(t, 5, 1e-3);
    const Scenario b = make_trial_scenario(t, 5, 1e-2);
    const Scenario c = make_trial_scenario(t, 6, 1e-3);
    for (std::size_t i = 0; i < a.channels.size(); ++i) {
        CHECK((a.channels[i] - b.channels[i]).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.channels[i] - c.channels[i]).cwiseAbs().maxCoeff() > 0.0);
    }
    t.channel.seed = 2;
    CHECK((make_trial_scenario(t, 5, 1e-3).channels[0] - a.channels[0]).cwiseAbs().maxCoeff() > 0.0);
    CHECK(trial_init_seed(t, 5) == trial_init_seed(t, 5));
    CHECK(trial_init_seed(t, 5) != trial_init_seed(t, 6));
}

TEST_CASE("channel model validation")
{
    ChannelModel m;
    CHECK_NOTHROW(m.validate());
    m.d_min = 2000.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m = ChannelModel{};
    m.pathloss = PathlossLaw::Exponent;
    m.exponent = 0.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    CHECK(fading_from_string(to_string(Fading::Deterministic)) == Fading::Deterministic);
    CHECK(pathloss_from_string(to_string(PathlossLaw::Exponent)) == PathlossLaw::Exponent);
    CHECK_THROWS(fading_from_string("rician"));
}

TEST_CASE("coupling matrix")
{
    const MatrixXc c = coupling_matrix(5, 0.3);
    for (int i = 0; i < 5; ++i) {
        CHECK(c.row(i).norm() == doctest::Approx(1.0));
        double norm2 = 0.0;
        for (int l = 0; l < 5; ++l) norm2 += std::pow(0.09, std::abs(i - l));
        for (int j = 0; j < 5; ++j) {
            CHECK(std::abs(c(i, j) - std::pow(0.3, std::abs(i - j)) / std::sqrt(norm2)) < 1e-15);
        }
    }
    CHECK(std::abs(c(0, 2) / c(0, 0) - 0.09) < 1e-15);
    CHECK((coupling_matrix(4, 0.0) - MatrixXc::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity coupling reproduces the uncoupled classical baseline")
{
    const ScenarioTemplate t = reference_template();
    const Scenario sc = make_trial_scenario(t, 3, 1e-3);
    SolverConfig cfg = t.solver;
    cfg.seed = 4;
    Scenario cl_a, cl_b;
    const TransceiverState a = classical_baseline_solve(sc, std::nullopt, t.classical, cfg, &cl_a);
    const TransceiverState b = classical_baseline_solve(sc, MatrixXc::Identity(5, 5), t.classical, cfg, &cl_b);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(weighted_se(a, cl_a, Scheme::SDMA) == weighted_se(b, cl_b, Scheme::SDMA));
    CHECK(cl_a.num_bands == 1);
    CHECK(cl_a.num_users == 6);
    CHECK(cl_a.weights(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("singular coupling is rejected")
{
    const ScenarioTemplate t = reference_template();
    const Scenario sc = make_trial_scenario(t, 0, 1e-3);
    MatrixXc c = MatrixXc::Identity(5, 5);
    c.row(4) = c.row(3);
    CHECK_THROWS_AS(classical_baseline_solve(sc, c, t.classical, t.solver), std::invalid_argument);
    CHECK_THROWS_AS(classical_baseline_solve(sc, MatrixXc::Identity(4, 4), t.classical, t.solver),
                    std::invalid_argument);
}

TEST_CASE("mutual coupling lowers the average classical WSE")
{
    const ScenarioTemplate t = reference_template();
    double with = 0.0, without = 0.0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const Scenario sc = make_trial_scenario(t, trial, 1e-3);
        SolverConfig cfg = t.solver;
        cfg.seed = trial_init_seed(t, trial);
        Scenario cl_a, cl_b;
        const TransceiverState a =
            classical_baseline_solve(sc, coupling_matrix(sc.n_r, t.coupling_rho), t.classical, cfg, &cl_a);
        const TransceiverState b = classical_baseline_solve(sc, std::nullopt, t.classical, cfg, &cl_b);
        with += weighted_se(a, cl_a, Scheme::SDMA);
        without += weighted_se(b, cl_b, Scheme::SDMA);
    }
    CHECK(with / trials < without / trials);
}

TEST_CASE("scheme names round-trip")
{
    for (SchemeId s : all_schemes()) CHECK(scheme_id_from_string(to_string(s)) == s);
    CHECK(std::string(to_string(SchemeId::CSdmaNoMc)) == "cSDMA-noMC");
    CHECK_THROWS(scheme_id_from_string("qTDMA"));
}

TEST_CASE("a single trial yields one row per scheme in order")
{
    CampaignConfig cc;
    cc.num_trials = 1;
    cc.power_grid = {1e-3};
    cc.threads = 1;
    const CampaignResult r = run_campaign(cc, reference_template());
    REQUIRE(r.rows.size() == all_schemes().size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(r.rows[i].scheme == all_schemes()[i]);
        CHECK(r.rows[i].ok);
        CHECK(r.rows[i].wse > 0.0);
    }
    CHECK(r.num_failed() == 0);
    CHECK(r.aggregates.size() == all_schemes().size());
    CHECK(r.aggregates[0].num_ok == 1);
    CHECK(r.aggregates[0].wse_std == 0.0);
    CHECK(r.rows[0].e_lo.size() == 2);
    CHECK(r.rows[4].e_lo.size() == 0);
}

TEST_CASE("campaigns are deterministic and independent of the thread count")
{
    CampaignConfig cc;
    cc.num_trials = 3;
    cc.power_grid = {1e-4, 1e-2};
    cc.schemes = {SchemeId::QSdmaOpt, SchemeId::QFdmaNoOpt, SchemeId::CSdmaMc};
    cc.threads = 1;
    const ScenarioTemplate t = reference_template();
    const CampaignResult a = run_campaign(cc, t);
    cc.threads = 3;
    const CampaignResult b = run_campaign(cc, t);
    CHECK(same_rows(a.rows, b.rows));
    REQUIRE(a.rows.size() == 18);
    CHECK(a.rows[3].trial == 1);
    CHECK(a.rows[9].power == 1e-2);
    CHECK(a.rows[1].scheme == SchemeId::QFdmaNoOpt);
}

TEST_CASE("failed work items are recorded and counted")
{
    ScenarioTemplate t = reference_template();
    t.atomic.omega_c = 0.0;
    t.atomic.gamma.tail(3).setConstant(1e-20);
    CampaignConfig cc;
    cc.num_trials = 2;
    cc.power_grid = {1e-3};
    cc.schemes = {SchemeId::QSdmaNoOpt, SchemeId::CSdmaNoMc};
    cc.threads = 1;
    const CampaignResult r = run_campaign(cc, t);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.num_failed() == 2);
    CHECK_FALSE(r.rows[0].ok);
    CHECK_FALSE(r.rows[0].error.empty());
    CHECK(r.rows[1].ok);
    CHECK(r.aggregates[0].num_failed == 2);
    CHECK(std::isnan(r.aggregates[0].wse_mean));
    CHECK(r.aggregates[1].num_ok == 2);
}

TEST_CASE("aggregate uses the sample standard deviation")
{
    CampaignConfig cc;
    cc.power_grid = {1.0};
    cc.schemes = {SchemeId::QSdmaOpt};
    std::vector<TrialRow> rows(3);
    const double w[] = {1.0, 2.0, 4.0};
    for (int i = 0; i < 3; ++i) {
        rows[i].power = 1.0;
        rows[i].ok = true;
        rows[i].converged = i != 2;
        rows[i].wse = w[i];
        rows[i].sum_rate = 10.0 * w[i];
        rows[i].iterations = 2 * i;
    }
    const AggregateRow a = aggregate(rows, cc).at(0);
    CHECK(a.wse_mean == doctest::Approx(7.0 / 3.0));
    CHECK(a.wse_std == doctest::Approx(std::sqrt(7.0 / 3.0)));
    CHECK(a.sum_rate_std == doctest::Approx(10.0 * std::sqrt(7.0 / 3.0)));
    CHECK(a.iterations_mean == doctest::Approx(2.0));
    CHECK(a.num_not_converged == 1);
}

TEST_CASE("low transmit power converges in fewer iterations")
{
    ScenarioTemplate t = reference_template();
    double low = 0.0, high = 0.0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        low += run_trial(t, SchemeId::QSdmaNoOpt, trial, 1e-4).iterations;
        high += run_trial(t, SchemeId::QSdmaNoOpt, trial, 1e-1).iterations;
    }
    CHECK(low < high);
}

TEST_CASE("thread count from the environment")
{
    setenv("RAQMIMO_THREADS", "3", 1);
    CHECK(default_thread_count() == 3);
    setenv("RAQMIMO_THREADS", "zero", 1);
    CHECK(default_thread_count() >= 1);
    unsetenv("RAQMIMO_THREADS");
}
