// SPDX-License-Identifier: Apache-2.0
#include "raqmimo/scenario_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "raqmimo/constants.hpp"
#include "raqmimo/errors.hpp"
#include "raqmimo/linalg.hpp"

namespace raqmimo {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_stream(std::uint64_t seed, int trial, std::uint64_t salt)
{
    return splitmix64(splitmix64(seed ^ salt) + static_cast<std::uint64_t>(trial));
}

constexpr std::uint64_t kChannelSalt = 0x6368616e6e656c00ULL;
constexpr std::uint64_t kInitSalt = 0x696e697469616c00ULL;

bool is_quantum(SchemeId s)
{
    return s == SchemeId::QSdmaOpt || s == SchemeId::QSdmaNoOpt || s == SchemeId::QFdmaOpt ||
           s == SchemeId::QFdmaNoOpt;
}

}  // namespace

const char* to_string(Fading fading)
{
    switch (fading) {
    case Fading::IidRayleigh: return "iid-rayleigh";
    case Fading::Deterministic: return "deterministic";
    }
    return "?";
}

Fading fading_from_string(const std::string& name)
{
    if (name == "iid-rayleigh") return Fading::IidRayleigh;
    if (name == "deterministic") return Fading::Deterministic;
    throw std::invalid_argument("unknown fading model '" + name + "'");
}

const char* to_string(PathlossLaw law)
{
    switch (law) {
    case PathlossLaw::FreeSpace: return "free-space";
    case PathlossLaw::Exponent: return "exponent";
    }
    return "?";
}

PathlossLaw pathloss_from_string(const std::string& name)
{
    if (name == "free-space") return PathlossLaw::FreeSpace;
    if (name == "exponent") return PathlossLaw::Exponent;
    throw std::invalid_argument("unknown pathloss law '" + name + "'");
}

void ChannelModel::validate() const
{
    if (!(d_min > 0.0) || !(d_max >= d_min) || !std::isfinite(d_max)) {
        throw std::invalid_argument("ChannelModel: need 0 < d_min <= d_max");
    }
    if (pathloss == PathlossLaw::Exponent && !(exponent > 0.0)) {
        throw std::invalid_argument("ChannelModel: pathloss exponent must be positive");
    }
}

double pathloss_amplitude(const ChannelModel& model, double distance, double f_c)
{
    const double lambda = constants::c0 / f_c;
    const double n = model.pathloss == PathlossLaw::FreeSpace ? 2.0 : model.exponent;
    return lambda / (4.0 * constants::pi) * std::pow(distance, -0.5 * n);
}

MatrixXc sample_channel(const ChannelModel& model, int n_r, int n_t, double f_c, std::mt19937_64& rng)
{
    model.validate();
    std::uniform_real_distribution<double> dist(model.d_min, model.d_max);
    const double d = model.d_min == model.d_max ? model.d_min : dist(rng);
    const double beta = pathloss_amplitude(model, d, f_c);
    if (model.fading == Fading::Deterministic) return MatrixXc::Constant(n_r, n_t, Complex(beta, 0.0));

    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    MatrixXc h(n_r, n_t);
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
        for (Eigen::Index r = 0; r < h.rows(); ++r) h(r, c) = beta * Complex(normal(rng), normal(rng));
    }
    return h;
}

MatrixXc coupling_matrix(int n, Complex rho)
{
    MatrixXc c(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) c(i, j) = std::pow(rho, std::abs(i - j));
    }
    for (int i = 0; i < n; ++i) c.row(i) /= c.row(i).norm();
    return c;
}

TransceiverState classical_baseline_solve(const Scenario& scenario, const std::optional<MatrixXc>& coupling,
                                          const ClassicalReceiver& receiver, const SolverConfig& config,
                                          Scenario* classical_out)
{
    scenario.validate();
    const int n_r = scenario.n_r;
    MatrixXc c = MatrixXc::Identity(n_r, n_r);
    if (coupling) {
        if (coupling->rows() != n_r || coupling->cols() != n_r) {
            throw std::invalid_argument("classical_baseline_solve: coupling must be N_r x N_r");
        }
        Eigen::FullPivLU<MatrixXc> lu(*coupling);
        if (!lu.isInvertible() || lu.rcond() < 1e-12) {
            throw std::invalid_argument("classical_baseline_solve: coupling matrix is singular");
        }
        c = *coupling;
    }

    const double ktb = constants::k_b * receiver.temperature * receiver.bandwidth;
    const double f = std::pow(10.0, receiver.noise_figure_db / 10.0);

    Scenario cl;
    cl.num_bands = 1;
    cl.num_users = scenario.num_bands * scenario.num_users;
    cl.n_r = n_r;
    cl.n_t = scenario.n_t;
    cl.power_budgets.resize(1, cl.num_users);
    cl.weights.resize(1, cl.num_users);
    for (int m = 0; m < scenario.num_bands; ++m) {
        for (int k = 0; k < scenario.num_users; ++k) {
            const int j = scenario.index(m, k);
            cl.channels.push_back(c * scenario.channel(m, k));
            cl.power_budgets(0, j) = scenario.power_budgets(m, k);
            cl.weights(0, j) = scenario.weights(m, k) / scenario.num_bands;
        }
    }
    BandFrontEnd fe = scenario.front_ends.at(0);
    fe.bandwidth = receiver.bandwidth;
    fe.bw_if = receiver.bandwidth;
    cl.front_ends = {fe};
    cl.noise.sigma_e2 = ktb * (f - 1.0);
    cl.noise.temperature = receiver.temperature;
    cl.c_sig = VectorXd::Ones(1);
    cl.c_q = {linalg::hermitian_part(MatrixXc(ktb * c * c.adjoint()))};
    cl.fixed_gains = VectorXd::Ones(1);

    SolverConfig cfg = config;
    cfg.scheme = Scheme::SDMA;
    cfg.optimize_lo = false;
    TransceiverState state = qwmmse_solve(cl, cfg);
    if (classical_out) *classical_out = std::move(cl);
    return state;
}

const char* to_string(SchemeId scheme)
{
    switch (scheme) {
    case SchemeId::QSdmaOpt: return "qSDMA-Opt";
    case SchemeId::QSdmaNoOpt: return "qSDMA-NoOpt";
    case SchemeId::QFdmaOpt: return "qFDMA-Opt";
    case SchemeId::QFdmaNoOpt: return "qFDMA-NoOpt";
    case SchemeId::CSdmaMc: return "cSDMA-MC";
    case SchemeId::CSdmaNoMc: return "cSDMA-noMC";
    }
    return "?";
}

SchemeId scheme_id_from_string(const std::string& name)
{
    for (SchemeId s : all_schemes()) {
        if (name == to_string(s)) return s;
    }
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::vector<SchemeId> all_schemes()
{
    return {SchemeId::QSdmaOpt, SchemeId::QSdmaNoOpt, SchemeId::QFdmaOpt,
            SchemeId::QFdmaNoOpt, SchemeId::CSdmaMc, SchemeId::CSdmaNoMc};
}

void CampaignConfig::validate() const
{
    if (num_trials < 1) throw std::invalid_argument("CampaignConfig: num_trials must be >= 1");
    if (power_grid.empty()) throw std::invalid_argument("CampaignConfig: power grid is empty");
    for (double p : power_grid) {
        if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("CampaignConfig: powers must be positive");
    }
    if (schemes.empty()) throw std::invalid_argument("CampaignConfig: no schemes selected");
    if (threads < 0) throw std::invalid_argument("CampaignConfig: threads must be >= 0");
}

void ScenarioTemplate::validate() const
{
    if (num_bands < 1 || num_users < 1 || n_r < 1 || n_t < 1) {
        throw std::invalid_argument("ScenarioTemplate: band, user and antenna counts must be positive");
    }
    if (atomic.num_bands != num_bands || static_cast<int>(front_ends.size()) != num_bands) {
        throw std::invalid_argument("ScenarioTemplate: atomic system and front ends must match num_bands");
    }
    atomic.validate();
    for (const auto& fe : front_ends) fe.validate();
    if (noise.zeta.size() != num_bands) throw std::invalid_argument("ScenarioTemplate: zeta needs one entry per band");
    if (!(e_lo_min >= 0.0)) throw std::invalid_argument("ScenarioTemplate: e_lo_min must be non-negative");
    channel.validate();
    if (!(solver.epsilon > 0.0) || solver.max_iterations < 1) {
        throw std::invalid_argument("ScenarioTemplate: solver needs epsilon > 0 and max_iterations >= 1");
    }
    if (solver.initial_e_lo.size() != 0 && solver.initial_e_lo.size() != num_bands) {
        throw std::invalid_argument("ScenarioTemplate: initial_e_lo needs one entry per band");
    }
    if (!(std::abs(coupling_rho) < 1.0)) throw std::invalid_argument("ScenarioTemplate: |coupling rho| must be < 1");
}

ScenarioTemplate reference_template()
{
    ScenarioTemplate t;
    t.atomic = reference_dual_band_system();
    t.front_ends = {reference_front_end(6.938e9), reference_front_end(31.793e9)};
    t.noise.sigma_e2 = electronic_noise_variance(TiaParameters{});
    t.noise.temperature = t.atomic.temperature;
    t.noise.zeta = VectorXd::Ones(2);
    t.noise.correlation_kind = CorrelationKind::Identity;
    t.classical.temperature = t.atomic.temperature;
    t.classical.bandwidth = t.front_ends[0].bw_if;
    return t;
}

Scenario make_trial_scenario(const ScenarioTemplate& tmpl, int trial, double power)
{
    tmpl.validate();
    Scenario sc;
    sc.num_bands = tmpl.num_bands;
    sc.num_users = tmpl.num_users;
    sc.n_r = tmpl.n_r;
    sc.n_t = tmpl.n_t;
    sc.power_budgets = MatrixXd::Constant(sc.num_bands, sc.num_users, power);
    sc.weights = MatrixXd::Ones(sc.num_bands, sc.num_users);
    sc.front_ends = tmpl.front_ends;
    sc.noise = tmpl.noise;
    if (sc.noise.correlation_kind != CorrelationKind::Custom) build_correlations(sc.noise, sc.front_ends, sc.n_r);
    sc.atomic = tmpl.atomic;
    sc.e_lo_min = tmpl.e_lo_min;

    std::mt19937_64 rng(trial_stream(tmpl.channel.seed, trial, kChannelSalt));
    for (int m = 0; m < sc.num_bands; ++m) {
        for (int k = 0; k < sc.num_users; ++k) {
            sc.channels.push_back(sample_channel(tmpl.channel, sc.n_r, sc.n_t, sc.front_ends[m].f_c, rng));
        }
    }
    sc.populate_noise_terms();
    return sc;
}

std::uint64_t trial_init_seed(const ScenarioTemplate& tmpl, int trial)
{
    return trial_stream(tmpl.solver.seed, trial, kInitSalt);
}

TrialRow run_trial(const ScenarioTemplate& tmpl, SchemeId scheme, int trial, double power)
{
    TrialRow row;
    row.power = power;
    row.scheme = scheme;
    row.trial = trial;

    const Scenario sc = make_trial_scenario(tmpl, trial, power);
    SolverConfig cfg = tmpl.solver;
    cfg.seed = trial_init_seed(tmpl, trial);
    cfg.record_blocks = false;

    if (is_quantum(scheme)) {
        cfg.scheme = (scheme == SchemeId::QSdmaOpt || scheme == SchemeId::QSdmaNoOpt) ? Scheme::SDMA : Scheme::FDMA;
        cfg.optimize_lo = scheme == SchemeId::QSdmaOpt || scheme == SchemeId::QFdmaOpt;
        const TransceiverState st = qwmmse_solve(sc, cfg);
        row.wse = weighted_se(st, sc, cfg.scheme);
        row.sum_rate = sum_rate(st, sc, cfg.scheme);
        row.iterations = st.iterations;
        row.converged = st.converged;
        row.g_q = st.gains.g_q;
        row.e_lo = st.lo.e_lo;
    } else {
        std::optional<MatrixXc> coupling;
        if (scheme == SchemeId::CSdmaMc) coupling = coupling_matrix(sc.n_r, tmpl.coupling_rho);
        Scenario cl;
        const TransceiverState st = classical_baseline_solve(sc, coupling, tmpl.classical, cfg, &cl);
        row.wse = weighted_se(st, cl, Scheme::SDMA);
        row.sum_rate = sum_rate(st, cl, Scheme::SDMA);
        row.iterations = st.iterations;
        row.converged = st.converged;
        row.g_q = VectorXd();
        row.e_lo = VectorXd();
    }
    if (!std::isfinite(row.wse) || !std::isfinite(row.sum_rate)) {
        throw NumericalDegeneracyError("run_trial: non-finite spectral efficiency");
    }
    row.ok = true;
    return row;
}

int default_thread_count()
{
    if (const char* env = std::getenv("RAQMIMO_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int CampaignResult::num_failed() const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const TrialRow& r) { return !r.ok; }));
}

CampaignResult run_campaign(const CampaignConfig& config, const ScenarioTemplate& tmpl)
{
    config.validate();
    tmpl.validate();

    const std::size_t n_schemes = config.schemes.size();
    const std::size_t n_trials = static_cast<std::size_t>(config.num_trials);
    const std::size_t n_items = config.power_grid.size() * n_trials;
    CampaignResult result;
    result.rows.resize(n_items * n_schemes);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t item = next++; item < n_items; item = next++) {
            const double power = config.power_grid[item / n_trials];
            const int trial = static_cast<int>(item % n_trials);
            for (std::size_t s = 0; s < n_schemes; ++s) {
                TrialRow& slot = result.rows[item * n_schemes + s];
                try {
                    slot = run_trial(tmpl, config.schemes[s], trial, power);
                } catch (const std::exception& e) {
                    slot = TrialRow{};
                    slot.power = power;
                    slot.scheme = config.schemes[s];
                    slot.trial = trial;
                    slot.error = e.what();
                }
            }
        }
    };

    const int requested = config.threads > 0 ? config.threads : default_thread_count();
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(requested), n_items);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    result.aggregates = aggregate(result.rows, config);
    return result;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows, const CampaignConfig& config)
{
    std::vector<AggregateRow> out;
    for (double power : config.power_grid) {
        for (SchemeId scheme : config.schemes) {
            AggregateRow a;
            a.power = power;
            a.scheme = scheme;
            double s_wse = 0.0, s_wse2 = 0.0, s_rate = 0.0, s_rate2 = 0.0, s_it = 0.0;
            for (const auto& r : rows) {
                if (r.power != power || r.scheme != scheme) continue;
                if (!r.ok) {
                    ++a.num_failed;
                    continue;
                }
                ++a.num_ok;
                if (!r.converged) ++a.num_not_converged;
                s_wse += r.wse;
                s_wse2 += r.wse * r.wse;
                s_rate += r.sum_rate;
                s_rate2 += r.sum_rate * r.sum_rate;
                s_it += r.iterations;
            }
            if (a.num_ok > 0) {
                const double n = a.num_ok;
                a.wse_mean = s_wse / n;
                a.sum_rate_mean = s_rate / n;
                a.iterations_mean = s_it / n;
                if (a.num_ok > 1) {
                    a.wse_std = std::sqrt(std::max(0.0, (s_wse2 - n * a.wse_mean * a.wse_mean) / (n - 1.0)));
                    a.sum_rate_std =
                        std::sqrt(std::max(0.0, (s_rate2 - n * a.sum_rate_mean * a.sum_rate_mean) / (n - 1.0)));
                }
            } else {
                a.wse_mean = a.wse_std = a.sum_rate_mean = a.sum_rate_std = a.iterations_mean =
                    std::numeric_limits<double>::quiet_NaN();
            }
            out.push_back(a);
        }
    }
    return out;
}

}  // namespace raqmimo
