#include "fdcov/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fdcov::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& field, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size())
            throw ConfigError("trailing characters in value for '" + field + "'", field, line);
        if (!std::isfinite(x))
            throw ConfigError("non-finite value for '" + field + "'", field, line);
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse numeric value '" + v + "' for '" + field + "'", field,
                          line);
    }
}

long parse_long(const std::string& v, const std::string& field, int line) {
    const double x = parse_double(v, field, line);
    if (x != std::floor(x))
        throw ConfigError("'" + field + "' must be an integer", field, line);
    return static_cast<long>(x);
}

bool parse_bool(const std::string& v, const std::string& field, int line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("cannot parse boolean value '" + v + "' for '" + field + "'", field, line);
}

SweepAxis parse_axis(const std::string& v, const std::string& field, int line) {
    std::istringstream in(v);
    SweepAxis ax;
    std::string scale;
    if (!(in >> ax.parameter >> ax.start >> ax.stop >> ax.steps >> scale))
        throw ConfigError("sweep axis needs 'parameter start stop steps linear|log'", field,
                          line);
    std::string rest;
    if (in >> rest)
        throw ConfigError("trailing characters in sweep axis", field, line);
    if (scale == "log")
        ax.log_scale = true;
    else if (scale != "linear")
        throw ConfigError("sweep scale must be 'linear' or 'log'", field, line);
    return ax;
}

}  // namespace

const char* run_method_name(RunMethod m) {
    switch (m) {
        case RunMethod::Analytic: return "analytic";
        case RunMethod::MonteCarlo: return "mc";
        case RunMethod::Both: return "both";
    }
    return "?";
}

RunMethod run_method_from_name(const std::string& s) {
    if (s == "analytic") return RunMethod::Analytic;
    if (s == "mc" || s == "montecarlo") return RunMethod::MonteCarlo;
    if (s == "both") return RunMethod::Both;
    throw ConfigError("method must be analytic|mc|both", "method");
}

const std::vector<std::string>& sweep_parameter_whitelist() {
    static const std::vector<std::string> names = {
        "q",     "lambda_s_raw", "lambda_c_raw", "xi_db",  "p_c",
        "p_s",   "tau",          "r_th",         "m_antennas", "s_max",
        "k_user", "k_sbs",       "n0",           "shadow_mu",  "shadow_sigma"};
    return names;
}

void apply_parameter(NetworkParams& p, mc::MitigationConfig& m, const std::string& name,
                     double value) {
    if (name == "q") p.q = value;
    else if (name == "lambda_s_raw") p.lambda_s_raw = value;
    else if (name == "lambda_c_raw") p.lambda_c_raw = value;
    else if (name == "xi_db") p.xi_db = value;
    else if (name == "p_c") p.p_c = value;
    else if (name == "p_s") p.p_s = value;
    else if (name == "tau") m.tau = value;
    else if (name == "r_th") p.r_th = value;
    else if (name == "m_antennas") p.m_antennas = static_cast<int>(std::lround(value));
    else if (name == "s_max") p.s_max = static_cast<int>(std::lround(value));
    else if (name == "k_user") p.k_user = value;
    else if (name == "k_sbs") p.k_sbs = value;
    else if (name == "n0") p.n0 = value;
    else if (name == "shadow_mu") p.shadow_mu = value;
    else if (name == "shadow_sigma") p.shadow_sigma = value;
    else
        throw ConfigError("unknown sweep parameter '" + name + "'", name);
}

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("network-model: ") + e.what(), "network-model");
    }
    try {
        mitigation.validate();
        quadrature.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what(), "settings");
    }
    if (drops < 1) throw ConfigError("drops must be >= 1", "drops");
    if (sweep.size() > 2) throw ConfigError("at most two sweep axes", "sweep");
    for (const auto& ax : sweep) {
        const auto& wl = sweep_parameter_whitelist();
        if (std::find(wl.begin(), wl.end(), ax.parameter) == wl.end())
            throw ConfigError("sweep parameter '" + ax.parameter + "' not in the whitelist",
                              ax.parameter);
        if (!(ax.start < ax.stop))
            throw ConfigError("sweep start must be < stop", ax.parameter);
        if (ax.steps < 2) throw ConfigError("sweep needs steps >= 2", ax.parameter);
        if (ax.log_scale && !(ax.start > 0.0))
            throw ConfigError("log sweep needs start > 0", ax.parameter);
    }
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    bool have_axis1 = false, have_axis2 = false;
    SweepAxis axis1, axis2;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header", line, line_no);
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"network-model", "specfun", "analytic-coverage",
                                          "montecarlo-sim", "cli"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) { return section == k; }) == std::end(known))
                throw ConfigError("unknown section [" + section + "]", section, line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line, line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line, line_no);
        if (val.empty()) throw ConfigError("missing value for '" + key + "'", key, line_no);

        auto unknown = [&]() -> ConfigError {
            return ConfigError("unknown key '" + key + "' in section [" + section + "]", key,
                               line_no);
        };

        if (section == "network-model") {
            NetworkParams& p = cfg.params;
            if (key == "lambda_c_raw") p.lambda_c_raw = parse_double(val, key, line_no);
            else if (key == "lambda_s_raw") p.lambda_s_raw = parse_double(val, key, line_no);
            else if (key == "lambda_u_raw") p.lambda_u_raw = parse_double(val, key, line_no);
            else if (key == "p_c") p.p_c = parse_double(val, key, line_no);
            else if (key == "p_s") p.p_s = parse_double(val, key, line_no);
            else if (key == "beta") p.beta = parse_double(val, key, line_no);
            else if (key == "xi_db") p.xi_db = parse_double(val, key, line_no);
            else if (key == "m_antennas") p.m_antennas = static_cast<int>(parse_long(val, key, line_no));
            else if (key == "s_max") p.s_max = static_cast<int>(parse_long(val, key, line_no));
            else if (key == "r_th") p.r_th = parse_double(val, key, line_no);
            else if (key == "q") p.q = parse_double(val, key, line_no);
            else if (key == "shadow_mu") p.shadow_mu = parse_double(val, key, line_no);
            else if (key == "shadow_sigma") p.shadow_sigma = parse_double(val, key, line_no);
            else if (key == "k_user") p.k_user = parse_double(val, key, line_no);
            else if (key == "k_sbs") p.k_sbs = parse_double(val, key, line_no);
            else if (key == "n0") p.n0 = parse_double(val, key, line_no);
            else throw unknown();
        } else if (section == "specfun") {
            if (key == "rel_tol") cfg.quadrature.rel_tol = parse_double(val, key, line_no);
            else if (key == "abs_tol") cfg.quadrature.abs_tol = parse_double(val, key, line_no);
            else if (key == "max_subdivisions")
                cfg.quadrature.max_subdivisions = static_cast<int>(parse_long(val, key, line_no));
            else throw unknown();
        } else if (section == "analytic-coverage") {
            if (key == "assume_perfect_backhaul")
                cfg.assume_perfect_backhaul = parse_bool(val, key, line_no);
            else throw unknown();
        } else if (section == "montecarlo-sim") {
            if (key == "drops") cfg.drops = parse_long(val, key, line_no);
            else if (key == "seed")
                cfg.seed = static_cast<std::uint64_t>(parse_long(val, key, line_no));
            else if (key == "region_radius") cfg.region_radius = parse_double(val, key, line_no);
            else if (key == "threads") cfg.threads = static_cast<int>(parse_long(val, key, line_no));
            else if (key == "scheme") {
                try {
                    cfg.mitigation.scheme = mc::scheme_from_name(val);
                } catch (const std::exception& e) {
                    throw ConfigError(e.what(), key, line_no);
                }
            } else if (key == "tau") cfg.mitigation.tau = parse_double(val, key, line_no);
            else if (key == "pilot_contamination")
                cfg.mitigation.pilot_contamination = parse_bool(val, key, line_no);
            else if (key == "gated_interferers")
                cfg.mitigation.gated_interferers = parse_bool(val, key, line_no);
            else throw unknown();
        } else if (section == "cli") {
            if (key == "method") {
                try {
                    cfg.method = run_method_from_name(val);
                } catch (const std::exception& e) {
                    throw ConfigError(e.what(), key, line_no);
                }
            } else if (key == "format") {
                if (val == "csv") cfg.format = OutputFormat::Csv;
                else if (val == "json") cfg.format = OutputFormat::Json;
                else throw ConfigError("format must be csv|json", key, line_no);
            } else if (key == "out") cfg.out_path = val;
            else if (key == "timestamp") cfg.timestamp = parse_bool(val, key, line_no);
            else if (key == "sweep") {
                if (have_axis1) throw ConfigError("duplicate 'sweep' axis", key, line_no);
                axis1 = parse_axis(val, key, line_no);
                have_axis1 = true;
            } else if (key == "sweep2") {
                if (have_axis2) throw ConfigError("duplicate 'sweep2' axis", key, line_no);
                axis2 = parse_axis(val, key, line_no);
                have_axis2 = true;
            } else throw unknown();
        } else {
            throw ConfigError("key '" + key + "' appears before any section", key, line_no);
        }
    }
    if (have_axis2 && !have_axis1)
        throw ConfigError("'sweep2' requires a primary 'sweep' axis", "sweep2");
    if (have_axis1) cfg.sweep.push_back(axis1);
    if (have_axis2) cfg.sweep.push_back(axis2);
    cfg.validate();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path, "config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace fdcov::cli
