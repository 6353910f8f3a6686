// SPDX-License-Identifier: Apache-2.0
// Command-line driver: transconductance maps, single solves and Monte Carlo
// campaigns. Tables go to CSV with a JSON sidecar describing the run.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "json.hpp"
#include "raqmimo/config.hpp"
#include "raqmimo/csv.hpp"
#include "raqmimo/errors.hpp"
#include "raqmimo/physics.hpp"
#include "raqmimo/scenario_mc.hpp"
#include "raqmimo/wmmse.hpp"

#ifndef RAQMIMO_VERSION
#define RAQMIMO_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace raqmimo;
using json = nlohmann::json;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::vector<std::string> overrides;
};

ExperimentConfig resolve_config(const GlobalOptions& opt)
{
    ExperimentConfig cfg = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
    cfg = apply_overrides(cfg, opt.overrides);
    if (opt.seed) cfg.apply_seed(*opt.seed);
    if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;
    return cfg;
}

fs::path prepare_out_dir(const ExperimentConfig& cfg)
{
    fs::path dir(cfg.output.dir);
    fs::create_directories(dir);
    return dir;
}

void write_sidecar(const fs::path& path, const std::string& command, const ExperimentConfig& cfg, json extra)
{
    json meta{
        {"command", command},
        {"version", RAQMIMO_VERSION},
        {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
        {"compiler", __VERSION__},
        {"config_hash", config_hash(cfg)},
        {"seed", cfg.seed},
        {"config", json::parse(serialize_config(cfg))},
    };
    for (auto& item : extra.items()) meta[item.key()] = item.value();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << meta.dump(2) << '\n';
}

std::vector<std::string> indexed(const std::string& stem, int count)
{
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(stem + "_" + std::to_string(i));
    return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void vector_fields(CsvWriter& w, const VectorXd& v, int count)
{
    for (int i = 0; i < count; ++i) {
        if (i < v.size()) {
            w.field(v[i]);
        } else {
            w.missing();
        }
    }
}

double to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

int cmd_map(const GlobalOptions& opt)
{
    const ExperimentConfig cfg = resolve_config(opt);
    const AtomicSystem& atomic = cfg.scenario.atomic;
    if (atomic.num_bands != 2) throw ConfigError("map requires a dual-band atomic system");
    const fs::path dir = prepare_out_dir(cfg);

    const auto xs = cfg.map.e_lo_1.points();
    const auto ys = cfg.map.e_lo_2.points();
    CsvWriter w((dir / "map.csv").string(), {"e_lo_1", "e_lo_2", "t_p", "g_q_1", "g_q_2"});
    int degenerate = 0;
    for (double x : xs) {
        for (double y : ys) {
            LOConfig lo{VectorXd{{x, y}}, 0.0};
            w.field(x).field(y);
            try {
                const SteadyStateSolution ss = solve_steady_state(atomic, lo, false);
                const QuantumGains g = transconductances(atomic, ss);
                w.field(probe_transmission(atomic, ss)).field(g.g_q[0]).field(g.g_q[1]);
            } catch (const DegenerateOperatingPointError&) {
                w.missing().missing().missing();
                ++degenerate;
            }
            w.end_row();
        }
    }
    write_sidecar(dir / "map.json", "map", cfg, json{{"grid_points", xs.size() * ys.size()}, {"degenerate", degenerate}});
    std::cerr << "map: " << xs.size() * ys.size() << " points (" << degenerate << " degenerate) -> "
              << (dir / "map.csv").string() << '\n';
    return 0;
}

int cmd_solve(const GlobalOptions& opt)
{
    const ExperimentConfig cfg = resolve_config(opt);
    const ScenarioTemplate& tmpl = cfg.scenario;
    const fs::path dir = prepare_out_dir(cfg);
    const int m = tmpl.num_bands;

    const Scenario sc = make_trial_scenario(tmpl, cfg.solve.trial, cfg.solve.power);
    SolverConfig sol = tmpl.solver;
    sol.seed = trial_init_seed(tmpl, cfg.solve.trial);
    const SchemeId id = cfg.solve.scheme;

    TransceiverState st;
    double final_wse = 0.0;
    double final_rate = 0.0;
    const bool quantum = id != SchemeId::CSdmaMc && id != SchemeId::CSdmaNoMc;
    if (!quantum) {
        std::optional<MatrixXc> coupling;
        if (id == SchemeId::CSdmaMc) coupling = coupling_matrix(sc.n_r, tmpl.coupling_rho);
        Scenario cl;
        st = classical_baseline_solve(sc, coupling, tmpl.classical, sol, &cl);
        final_wse = weighted_se(st, cl, Scheme::SDMA);
        final_rate = sum_rate(st, cl, Scheme::SDMA);
    } else {
        sol.scheme = (id == SchemeId::QSdmaOpt || id == SchemeId::QSdmaNoOpt) ? Scheme::SDMA : Scheme::FDMA;
        sol.optimize_lo = id == SchemeId::QSdmaOpt || id == SchemeId::QFdmaOpt;
        st = qwmmse_solve(sc, sol);
        final_wse = weighted_se(st, sc, sol.scheme);
        final_rate = sum_rate(st, sc, sol.scheme);
    }

    const auto header = concat(concat(concat({"row", "iteration", "f_q", "wse"}, indexed("g_q", m)), indexed("e_lo", m)),
                               {"sum_rate", "converged"});
    CsvWriter w((dir / "solve.csv").string(), header);
    for (const auto& rec : st.history) {
        w.field(std::string("iteration")).field(rec.iteration).field(rec.f_q).field(rec.wse);
        vector_fields(w, quantum ? rec.g_q : VectorXd(), m);
        vector_fields(w, quantum ? rec.e_lo : VectorXd(), m);
        w.missing().missing();
        w.end_row();
    }
    w.field(std::string("summary")).field(st.iterations);
    w.field(st.objective_trace.empty() ? std::nan("") : st.objective_trace.back()).field(final_wse);
    vector_fields(w, quantum ? st.gains.g_q : VectorXd(), m);
    vector_fields(w, quantum ? st.lo.e_lo : VectorXd(), m);
    w.field(final_rate).field(st.converged ? 1 : 0);
    w.end_row();

    write_sidecar(dir / "solve.json", "solve", cfg,
                  json{{"scheme", to_string(id)},
                       {"power_w", cfg.solve.power},
                       {"trial", cfg.solve.trial},
                       {"iterations", st.iterations},
                       {"converged", st.converged},
                       {"regularized", st.regularized}});
    std::cerr << "solve: " << to_string(id) << " " << st.iterations << " iterations, WSE " << final_wse
              << (st.converged ? "" : " (iteration cap reached)") << '\n';
    return 0;
}

void write_plot_script(const fs::path& dir)
{
    std::ofstream out(dir / "plot_campaign.py");
    out << "import pandas as pd\n"
           "import matplotlib.pyplot as plt\n\n"
           "summary = pd.read_csv('campaign_summary.csv')\n"
           "trials = pd.read_csv('campaign_trials.csv')\n\n"
           "fig, ax = plt.subplots(1, 2, figsize=(10, 4))\n"
           "for scheme, g in summary.groupby('scheme'):\n"
           "    ax[0].errorbar(g['power_dbm'], g['wse_mean'], yerr=g['wse_std'], label=scheme, capsize=3)\n"
           "    ax[1].plot(g['power_dbm'], g['sum_rate_mean'], marker='o', label=scheme)\n"
           "ax[0].set_xlabel('P_max [dBm]')\n"
           "ax[0].set_ylabel('weighted SE [bit/s/Hz]')\n"
           "ax[1].set_xlabel('P_max [dBm]')\n"
           "ax[1].set_ylabel('sum rate [bit/s]')\n"
           "ax[0].legend()\n"
           "fig.tight_layout()\n"
           "fig.savefig('campaign_wse.png', dpi=150)\n\n"
           "p = trials['power_dbm'].max()\n"
           "fig, ax = plt.subplots()\n"
           "for scheme, g in trials[(trials['power_dbm'] == p) & (trials['ok'] == 1)].groupby('scheme'):\n"
           "    ax.hist(g['wse'], bins=40, alpha=0.5, label=scheme)\n"
           "ax.set_xlabel('weighted SE [bit/s/Hz]')\n"
           "ax.legend()\n"
           "fig.savefig('campaign_hist.png', dpi=150)\n";
}

int cmd_campaign(const GlobalOptions& opt)
{
    const ExperimentConfig cfg = resolve_config(opt);
    const ScenarioTemplate& tmpl = cfg.scenario;
    const fs::path dir = prepare_out_dir(cfg);
    const int m = tmpl.num_bands;

    const CampaignResult res = run_campaign(cfg.campaign, tmpl);

    {
        const auto header = concat(concat(concat({"power_w", "power_dbm", "scheme", "trial", "ok", "wse", "sum_rate",
                                                  "iterations", "converged"},
                                                 indexed("g_q", m)),
                                          indexed("e_lo", m)),
                                   {"error"});
        CsvWriter w((dir / "campaign_trials.csv").string(), header);
        for (const auto& r : res.rows) {
            w.field(r.power).field(to_dbm(r.power)).field(std::string(to_string(r.scheme))).field(r.trial);
            w.field(r.ok ? 1 : 0);
            if (r.ok) {
                w.field(r.wse).field(r.sum_rate).field(r.iterations).field(r.converged ? 1 : 0);
            } else {
                w.missing().missing().missing().missing();
            }
            vector_fields(w, r.g_q, m);
            vector_fields(w, r.e_lo, m);
            w.field(r.error);
            w.end_row();
        }
    }
    {
        CsvWriter w((dir / "campaign_summary.csv").string(),
                    {"power_w", "power_dbm", "scheme", "num_ok", "num_failed", "num_not_converged", "wse_mean",
                     "wse_std", "sum_rate_mean", "sum_rate_std", "iterations_mean"});
        for (const auto& a : res.aggregates) {
            w.field(a.power).field(to_dbm(a.power)).field(std::string(to_string(a.scheme)));
            w.field(a.num_ok).field(a.num_failed).field(a.num_not_converged);
            w.field(a.wse_mean).field(a.wse_std).field(a.sum_rate_mean).field(a.sum_rate_std).field(a.iterations_mean);
            w.end_row();
        }
    }
    if (cfg.output.plot_scripts) write_plot_script(dir);

    json failures = json::array();
    for (const auto& r : res.rows) {
        if (!r.ok) {
            failures.push_back({{"power_w", r.power}, {"scheme", to_string(r.scheme)}, {"trial", r.trial},
                                {"error", r.error}});
        }
    }
    const int failed = res.num_failed();
    write_sidecar(dir / "campaign.json", "campaign", cfg,
                  json{{"work_items", res.rows.size()}, {"failed", failed}, {"failures", failures}});
    std::cerr << "campaign: " << res.rows.size() << " work items, " << failed << " failed -> " << dir.string()
              << '\n';
    return failed == 0 ? 0 : 3;
}

int cmd_config(const GlobalOptions& opt)
{
    std::cout << serialize_config(resolve_config(opt)) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-band Rydberg-receiver MU-MIMO uplink simulator"};
    app.require_subcommand(1);
    GlobalOptions opt;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Master seed (channels and initial precoders)");
        sub->add_option("--out-dir", opt.out_dir, "Output directory");
        sub->add_option("--override", opt.overrides, "Dotted key=value override, repeatable");
    };
    CLI::App* map = app.add_subcommand("map", "Probe transmission and transconductance over an LO field grid");
    CLI::App* solve = app.add_subcommand("solve", "Single optimizer run with per-iteration trajectory");
    CLI::App* campaign = app.add_subcommand("campaign", "Monte Carlo campaign over the power grid");
    CLI::App* config = app.add_subcommand("config", "Print the resolved configuration");
    for (CLI::App* sub : {map, solve, campaign, config}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        for (CLI::App* sub : {map, solve, campaign, config}) {
            if (sub->count("--seed") > 0) opt.seed = seed;
        }
        if (*map) return cmd_map(opt);
        if (*solve) return cmd_solve(opt);
        if (*campaign) return cmd_campaign(opt);
        if (*config) return cmd_config(opt);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
