// SPDX-License-Identifier: Apache-2.0
#include "raqmimo/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "raqmimo/constants.hpp"
#include "raqmimo/errors.hpp"

namespace raqmimo {

using json = nlohmann::json;

namespace {

struct Unit {
    const char* name;
    double scale;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& context)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ConfigError("cannot parse number '" + text + "' in " + context);
    return v;
}

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ConfigError(path + ": " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || item.key() == a;
        if (!ok) fail(path, "unknown key '" + item.key() + "'");
    }
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

double read_quantity(const json& v, const std::string& path, const std::string& kind)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return parse_quantity(v.get<std::string>(), kind);
        } catch (const ConfigError& e) {
            fail(path, e.what());
        }
    }
    fail(path, "expected a number or a quantity string");
}

void read(const json& j, const std::string& path, const char* key, double& out, const std::string& kind = "")
{
    if (!j.contains(key)) return;
    out = read_quantity(j.at(key), join(path, key), kind);
}

void read(const json& j, const std::string& path, const char* key, int& out)
{
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    out = v.get<int>();
}

void read(const json& j, const std::string& path, const char* key, bool& out)
{
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_boolean()) fail(join(path, key), "expected true or false");
    out = v.get<bool>();
}

void read(const json& j, const std::string& path, const char* key, std::string& out)
{
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    out = v.get<std::string>();
}

void read(const json& j, const std::string& path, const char* key, VectorXd& out, const std::string& kind = "")
{
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    const std::string p = join(path, key);
    if (!v.is_array()) fail(p, "expected an array");
    out.resize(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = read_quantity(v[i], p + "." + std::to_string(i), kind);
    }
}

json to_array(const VectorXd& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

void parse_atomic(const json& j, AtomicSystem& a)
{
    const std::string p = "atomic";
    check_keys(j, p,
               {"num_bands", "omega_p", "omega_c", "delta_p", "delta_c", "delta_rf", "gamma", "mu_rf", "mu_12", "n0",
                "lambda_p", "cell_length", "i_ph0", "temperature"});
    int bands = a.num_bands;
    read(j, p, "num_bands", bands);
    if (bands == 1 && a.num_bands != 1) a = reference_single_band_system();
    a.num_bands = bands;
    read(j, p, "omega_p", a.omega_p, "angular");
    read(j, p, "omega_c", a.omega_c, "angular");
    read(j, p, "delta_p", a.delta_p, "angular");
    read(j, p, "delta_c", a.delta_c, "angular");
    read(j, p, "delta_rf", a.delta_rf, "angular");
    read(j, p, "gamma", a.gamma, "angular");
    read(j, p, "mu_rf", a.mu_rf, "dipole");
    read(j, p, "mu_12", a.mu_12, "dipole");
    read(j, p, "n0", a.n0, "density");
    read(j, p, "lambda_p", a.lambda_p, "length");
    read(j, p, "cell_length", a.cell_length, "length");
    read(j, p, "i_ph0", a.i_ph0, "current");
    read(j, p, "temperature", a.temperature);
}

json atomic_to_json(const AtomicSystem& a)
{
    return json{{"num_bands", a.num_bands},   {"omega_p", a.omega_p},         {"omega_c", a.omega_c},
                {"delta_p", a.delta_p},       {"delta_c", a.delta_c},         {"delta_rf", to_array(a.delta_rf)},
                {"gamma", to_array(a.gamma)}, {"mu_rf", to_array(a.mu_rf)},   {"mu_12", a.mu_12},
                {"n0", a.n0},                 {"lambda_p", a.lambda_p},       {"cell_length", a.cell_length},
                {"i_ph0", a.i_ph0},           {"temperature", a.temperature}};
}

BandFrontEnd parse_band(const json& j, const std::string& p)
{
    check_keys(j, p, {"f_c", "bandwidth", "v_ref", "r_t", "k_c", "cell_length", "bw_if"});
    if (!j.contains("f_c")) fail(p, "missing f_c");
    BandFrontEnd fe = reference_front_end(read_quantity(j.at("f_c"), join(p, "f_c"), "frequency"));
    read(j, p, "bandwidth", fe.bandwidth, "frequency");
    read(j, p, "v_ref", fe.v_ref, "voltage");
    read(j, p, "r_t", fe.r_t);
    read(j, p, "k_c", fe.k_c);
    read(j, p, "cell_length", fe.cell_length, "length");
    read(j, p, "bw_if", fe.bw_if, "frequency");
    return fe;
}

json band_to_json(const BandFrontEnd& fe)
{
    return json{{"f_c", fe.f_c}, {"bandwidth", fe.bandwidth},     {"v_ref", fe.v_ref}, {"r_t", fe.r_t},
                {"k_c", fe.k_c}, {"cell_length", fe.cell_length}, {"bw_if", fe.bw_if}};
}

void parse_noise(const json& j, NoiseModel& n)
{
    const std::string p = "noise";
    check_keys(j, p, {"sigma_e2", "temperature", "zeta", "correlation", "element_spacing", "c_hat"});
    read(j, p, "sigma_e2", n.sigma_e2);
    read(j, p, "temperature", n.temperature);
    read(j, p, "zeta", n.zeta);
    std::string kind = to_string(n.correlation_kind);
    read(j, p, "correlation", kind);
    try {
        n.correlation_kind = correlation_kind_from_string(kind);
    } catch (const std::exception& e) {
        fail(join(p, "correlation"), e.what());
    }
    read(j, p, "element_spacing", n.element_spacing, "length");
    if (j.contains("c_hat")) {
        const json& list = j.at("c_hat");
        if (!list.is_array()) fail(join(p, "c_hat"), "expected one matrix per band");
        n.c_hat.clear();
        for (std::size_t b = 0; b < list.size(); ++b) {
            const std::string mp = join(p, "c_hat") + "." + std::to_string(b);
            const json& rows = list[b];
            if (!rows.is_array() || rows.empty()) fail(mp, "expected a square array of rows");
            const auto dim = static_cast<Eigen::Index>(rows.size());
            MatrixXc c(dim, dim);
            for (Eigen::Index r = 0; r < dim; ++r) {
                const json& row = rows[static_cast<std::size_t>(r)];
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) fail(mp, "matrix must be square");
                for (Eigen::Index col = 0; col < dim; ++col) {
                    const json& v = row[static_cast<std::size_t>(col)];
                    if (!v.is_number()) fail(mp, "entries must be real numbers");
                    c(r, col) = v.get<double>();
                }
            }
            n.c_hat.push_back(c);
        }
    }
}

json noise_to_json(const NoiseModel& n)
{
    json j{{"sigma_e2", n.sigma_e2},
           {"temperature", n.temperature},
           {"zeta", to_array(n.zeta)},
           {"correlation", to_string(n.correlation_kind)},
           {"element_spacing", n.element_spacing}};
    if (n.correlation_kind == CorrelationKind::Custom) {
        json list = json::array();
        for (const auto& c : n.c_hat) {
            json rows = json::array();
            for (Eigen::Index r = 0; r < c.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index col = 0; col < c.cols(); ++col) row.push_back(c(r, col).real());
                rows.push_back(row);
            }
            list.push_back(rows);
        }
        j["c_hat"] = list;
    }
    return j;
}

void parse_axis(const json& j, const std::string& p, AxisSpec& a)
{
    check_keys(j, p, {"min", "max", "num", "spacing"});
    read(j, p, "min", a.min, "field");
    read(j, p, "max", a.max, "field");
    read(j, p, "num", a.num);
    std::string spacing = a.log_spacing ? "log" : "linear";
    read(j, p, "spacing", spacing);
    if (spacing != "linear" && spacing != "log") fail(join(p, "spacing"), "expected 'linear' or 'log'");
    a.log_spacing = spacing == "log";
}

json axis_to_json(const AxisSpec& a)
{
    return json{{"min", a.min}, {"max", a.max}, {"num", a.num}, {"spacing", a.log_spacing ? "log" : "linear"}};
}

json config_to_json(const ExperimentConfig& c)
{
    const ScenarioTemplate& t = c.scenario;
    json bands = json::array();
    for (const auto& fe : t.front_ends) bands.push_back(band_to_json(fe));
    json grid = json::array();
    for (double p : c.campaign.power_grid) grid.push_back(p);
    json schemes = json::array();
    for (SchemeId s : c.campaign.schemes) schemes.push_back(to_string(s));

    return json{
        {"seed", c.seed},
        {"atomic", atomic_to_json(t.atomic)},
        {"bands", bands},
        {"noise", noise_to_json(t.noise)},
        {"scenario", {{"num_users", t.num_users}, {"n_r", t.n_r}, {"n_t", t.n_t}, {"e_lo_min", t.e_lo_min}}},
        {"channel",
         {{"fading", to_string(t.channel.fading)},
          {"d_min", t.channel.d_min},
          {"d_max", t.channel.d_max},
          {"pathloss", to_string(t.channel.pathloss)},
          {"exponent", t.channel.exponent}}},
        {"optimizer",
         {{"epsilon", t.solver.epsilon},
          {"max_iterations", t.solver.max_iterations},
          {"bisection_tol", t.solver.bisection_tol},
          {"initial_e_lo", to_array(t.solver.initial_e_lo)},
          {"armijo",
           {{"c", t.solver.armijo.c},
            {"shrink", t.solver.armijo.shrink},
            {"max_backtracks", t.solver.armijo.max_backtracks},
            {"initial_step_fraction", t.solver.armijo.initial_step_fraction}}}}},
        {"classical",
         {{"temperature", t.classical.temperature},
          {"noise_figure_db", t.classical.noise_figure_db},
          {"bandwidth", t.classical.bandwidth},
          {"coupling_rho", json::array({t.coupling_rho.real(), t.coupling_rho.imag()})}}},
        {"campaign",
         {{"num_trials", c.campaign.num_trials},
          {"power_grid", grid},
          {"schemes", schemes},
          {"threads", c.campaign.threads}}},
        {"solve", {{"power", c.solve.power}, {"trial", c.solve.trial}, {"scheme", to_string(c.solve.scheme)}}},
        {"map", {{"e_lo_1", axis_to_json(c.map.e_lo_1)}, {"e_lo_2", axis_to_json(c.map.e_lo_2)}}},
        {"output", {{"dir", c.output.dir}, {"plot_scripts", c.output.plot_scripts}}},
    };
}

ExperimentConfig config_from_json(const json& j)
{
    check_keys(j, "",
               {"seed", "atomic", "bands", "noise", "scenario", "channel", "optimizer", "classical", "campaign",
                "solve", "map", "output"});
    ExperimentConfig c = default_config();
    ScenarioTemplate& t = c.scenario;

    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned()) fail("seed", "expected a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("atomic")) parse_atomic(j.at("atomic"), t.atomic);
    t.num_bands = t.atomic.num_bands;
    if (t.num_bands != static_cast<int>(t.front_ends.size()) && t.num_bands <= static_cast<int>(t.front_ends.size())) {
        t.front_ends.resize(static_cast<std::size_t>(t.num_bands));
    }
    if (t.noise.zeta.size() != t.num_bands) t.noise.zeta = VectorXd::Ones(t.num_bands);

    if (j.contains("bands")) {
        const json& b = j.at("bands");
        if (!b.is_array()) fail("bands", "expected an array of band objects");
        t.front_ends.clear();
        for (std::size_t i = 0; i < b.size(); ++i) t.front_ends.push_back(parse_band(b[i], "bands." + std::to_string(i)));
    }
    if (j.contains("noise")) parse_noise(j.at("noise"), t.noise);

    if (j.contains("scenario")) {
        const json& s = j.at("scenario");
        check_keys(s, "scenario", {"num_users", "n_r", "n_t", "e_lo_min"});
        read(s, "scenario", "num_users", t.num_users);
        read(s, "scenario", "n_r", t.n_r);
        read(s, "scenario", "n_t", t.n_t);
        read(s, "scenario", "e_lo_min", t.e_lo_min, "field");
    }
    if (j.contains("channel")) {
        const json& s = j.at("channel");
        check_keys(s, "channel", {"fading", "d_min", "d_max", "pathloss", "exponent"});
        std::string fading = to_string(t.channel.fading);
        std::string law = to_string(t.channel.pathloss);
        read(s, "channel", "fading", fading);
        read(s, "channel", "pathloss", law);
        try {
            t.channel.fading = fading_from_string(fading);
            t.channel.pathloss = pathloss_from_string(law);
        } catch (const std::exception& e) {
            fail("channel", e.what());
        }
        read(s, "channel", "d_min", t.channel.d_min, "length");
        read(s, "channel", "d_max", t.channel.d_max, "length");
        read(s, "channel", "exponent", t.channel.exponent);
    }
    if (j.contains("optimizer")) {
        const json& s = j.at("optimizer");
        const std::string p = "optimizer";
        check_keys(s, p, {"epsilon", "max_iterations", "bisection_tol", "initial_e_lo", "armijo"});
        read(s, p, "epsilon", t.solver.epsilon);
        read(s, p, "max_iterations", t.solver.max_iterations);
        read(s, p, "bisection_tol", t.solver.bisection_tol);
        read(s, p, "initial_e_lo", t.solver.initial_e_lo, "field");
        if (s.contains("armijo")) {
            const json& a = s.at("armijo");
            const std::string ap = "optimizer.armijo";
            check_keys(a, ap, {"c", "shrink", "max_backtracks", "initial_step_fraction"});
            read(a, ap, "c", t.solver.armijo.c);
            read(a, ap, "shrink", t.solver.armijo.shrink);
            read(a, ap, "max_backtracks", t.solver.armijo.max_backtracks);
            read(a, ap, "initial_step_fraction", t.solver.armijo.initial_step_fraction);
        }
    }
    if (j.contains("classical")) {
        const json& s = j.at("classical");
        check_keys(s, "classical", {"temperature", "noise_figure_db", "bandwidth", "coupling_rho"});
        read(s, "classical", "temperature", t.classical.temperature);
        read(s, "classical", "noise_figure_db", t.classical.noise_figure_db);
        read(s, "classical", "bandwidth", t.classical.bandwidth, "frequency");
        if (s.contains("coupling_rho")) {
            const json& r = s.at("coupling_rho");
            if (r.is_number()) {
                t.coupling_rho = Complex(r.get<double>(), 0.0);
            } else if (r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number()) {
                t.coupling_rho = Complex(r[0].get<double>(), r[1].get<double>());
            } else {
                fail("classical.coupling_rho", "expected a number or [re, im]");
            }
        }
    }
    if (j.contains("campaign")) {
        const json& s = j.at("campaign");
        check_keys(s, "campaign", {"num_trials", "power_grid", "schemes", "threads"});
        read(s, "campaign", "num_trials", c.campaign.num_trials);
        read(s, "campaign", "threads", c.campaign.threads);
        if (s.contains("power_grid")) {
            VectorXd grid;
            read(s, "campaign", "power_grid", grid, "power");
            c.campaign.power_grid.assign(grid.data(), grid.data() + grid.size());
        }
        if (s.contains("schemes")) {
            const json& list = s.at("schemes");
            if (!list.is_array()) fail("campaign.schemes", "expected an array of scheme names");
            c.campaign.schemes.clear();
            for (const auto& name : list) {
                if (!name.is_string()) fail("campaign.schemes", "expected scheme names");
                try {
                    c.campaign.schemes.push_back(scheme_id_from_string(name.get<std::string>()));
                } catch (const std::exception& e) {
                    fail("campaign.schemes", e.what());
                }
            }
        }
    }
    if (j.contains("solve")) {
        const json& s = j.at("solve");
        check_keys(s, "solve", {"power", "trial", "scheme"});
        read(s, "solve", "power", c.solve.power, "power");
        read(s, "solve", "trial", c.solve.trial);
        std::string scheme = to_string(c.solve.scheme);
        read(s, "solve", "scheme", scheme);
        try {
            c.solve.scheme = scheme_id_from_string(scheme);
        } catch (const std::exception& e) {
            fail("solve.scheme", e.what());
        }
    }
    if (j.contains("map")) {
        const json& s = j.at("map");
        check_keys(s, "map", {"e_lo_1", "e_lo_2"});
        if (s.contains("e_lo_1")) parse_axis(s.at("e_lo_1"), "map.e_lo_1", c.map.e_lo_1);
        if (s.contains("e_lo_2")) parse_axis(s.at("e_lo_2"), "map.e_lo_2", c.map.e_lo_2);
    }
    if (j.contains("output")) {
        const json& s = j.at("output");
        check_keys(s, "output", {"dir", "plot_scripts"});
        read(s, "output", "dir", c.output.dir);
        read(s, "output", "plot_scripts", c.output.plot_scripts);
    }

    c.apply_seed(c.seed);
    try {
        c.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return c;
}

}  // namespace

std::vector<double> AxisSpec::points() const
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(num));
    for (int i = 0; i < num; ++i) {
        const double t = num == 1 ? 0.0 : static_cast<double>(i) / (num - 1);
        out.push_back(log_spacing ? min * std::pow(max / min, t) : min + (max - min) * t);
    }
    return out;
}

void ExperimentConfig::apply_seed(std::uint64_t new_seed)
{
    seed = new_seed;
    scenario.channel.seed = new_seed;
    scenario.solver.seed = new_seed;
}

void ExperimentConfig::validate() const
{
    scenario.validate();
    campaign.validate();
    if (!(solve.power > 0.0)) throw ConfigError("solve.power must be positive");
    if (solve.trial < 0) throw ConfigError("solve.trial must be non-negative");
    for (const AxisSpec* a : {&map.e_lo_1, &map.e_lo_2}) {
        if (a->num < 1 || !(a->min > 0.0) || !(a->max >= a->min)) {
            throw ConfigError("map axes need num >= 1 and 0 < min <= max");
        }
    }
    if (output.dir.empty()) throw ConfigError("output.dir must not be empty");
}

ExperimentConfig default_config()
{
    ExperimentConfig c;
    c.scenario = reference_template();
    c.campaign.power_grid = {1e-4, 1e-3, 1e-2};
    c.solve.power = 1e-3;
    c.apply_seed(1);
    return c;
}

double parse_quantity(const std::string& raw, const std::string& kind)
{
    std::string text = trim(raw);
    double prefactor = 1.0;
    bool angular_prefix = false;
    for (const char* p : {"2pi*", "2*pi*"}) {
        const std::string pre(p);
        if (text.rfind(pre, 0) == 0) {
            text = trim(text.substr(pre.size()));
            prefactor = constants::two_pi;
            angular_prefix = true;
            break;
        }
    }
    if (angular_prefix && kind != "angular") throw ConfigError("'2pi*' prefix only applies to angular rates: " + raw);

    const auto space = text.find_first_of(" \t");
    const std::string number = space == std::string::npos ? text : text.substr(0, space);
    const std::string unit = space == std::string::npos ? "" : trim(text.substr(space));
    const double value = parse_number(number, "'" + raw + "'");
    if (unit.empty()) {
        if (angular_prefix) throw ConfigError("'2pi*' needs a frequency unit: " + raw);
        return value;
    }

    if (kind == "power") {
        if (unit == "dBm") return 1e-3 * std::pow(10.0, value / 10.0);
        if (unit == "dBW") return std::pow(10.0, value / 10.0);
    }

    static const std::vector<std::pair<std::string, std::vector<Unit>>> table = {
        {"angular", {{"rad/s", 1.0}}},
        {"frequency", {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
        {"power", {{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}}},
        {"field", {{"V/m", 1.0}, {"mV/m", 1e-3}, {"uV/m", 1e-6}}},
        {"dipole", {{"C*m", 1.0}, {"ea0", constants::e_a0}}},
        {"length", {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
        {"density", {{"m^-3", 1.0}, {"cm^-3", 1e6}}},
        {"current", {{"A", 1.0}, {"mA", 1e-3}, {"uA", 1e-6}}},
        {"voltage", {{"V", 1.0}, {"mV", 1e-3}, {"uV", 1e-6}}},
    };
    static const std::vector<Unit> cycles = {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};

    const std::vector<Unit>* units = nullptr;
    if (angular_prefix) {
        units = &cycles;
    } else {
        for (const auto& [k, list] : table) {
            if (k == kind) units = &list;
        }
    }
    if (units) {
        for (const auto& u : *units) {
            if (unit == u.name) return prefactor * value * u.scale;
        }
    }
    if (kind == "angular" && !angular_prefix) {
        throw ConfigError("angular rate '" + raw + "' must be written as '2pi*<value> <unit>' or in rad/s");
    }
    throw ConfigError("unit '" + unit + "' not accepted here: " + raw);
}

ExperimentConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& config)
{
    return config_to_json(config).dump(2);
}

ExperimentConfig apply_overrides(const ExperimentConfig& config, const std::vector<std::string>& overrides)
{
    if (overrides.empty()) return config;
    json doc = config_to_json(config);
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + item + "' is not key=value");
        const std::string path = trim(item.substr(0, eq));
        const std::string value = item.substr(eq + 1);

        json* node = &doc;
        std::size_t start = 0;
        while (true) {
            const auto dot = path.find('.', start);
            const std::string seg = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (node->is_object()) {
                if (!node->contains(seg)) throw ConfigError("override: unknown key '" + path + "'");
                node = &(*node)[seg];
            } else if (node->is_array()) {
                std::size_t idx = 0;
                const auto [ptr, ec] = std::from_chars(seg.data(), seg.data() + seg.size(), idx);
                if (ec != std::errc() || ptr != seg.data() + seg.size() || idx >= node->size()) {
                    throw ConfigError("override: bad index '" + seg + "' in '" + path + "'");
                }
                node = &(*node)[idx];
            } else {
                throw ConfigError("override: '" + path + "' descends into a scalar");
            }
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        json parsed = json::parse(value, nullptr, false);
        *node = parsed.is_discarded() ? json(value) : parsed;
    }
    return config_from_json(doc);
}

std::string config_hash(const ExperimentConfig& config)
{
    const std::string text = config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace raqmimo
