// fdcov: rate-coverage evaluation for full-duplex wireless-backhauled small
// cells. Subcommands: coverage, sweep, solve, simulate, validate-config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdcov/analytic.hpp"
#include "fdcov/config.hpp"
#include "fdcov/montecarlo.hpp"
#include "fdcov/sweep.hpp"

namespace {

using fdcov::cli::ConfigError;
using fdcov::cli::OutputFormat;
using fdcov::cli::RunConfig;
using fdcov::cli::RunMethod;

void emit_error(const std::string& what, const std::string& field, int line) {
    nlohmann::json j;
    j["error"] = what;
    if (!field.empty()) j["field"] = field;
    if (line > 0) j["line"] = line;
    std::cerr << j.dump() << "\n";
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string method;
    long drops = -1;
    long seed = -1;
    int threads = 0;
    bool no_timestamp = false;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "config file (key = value sections)");
        app->add_option("--out", out_path, "output path (default: stdout)");
        app->add_option("--format", format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--method", method, "analytic|mc|both")
            ->check(CLI::IsMember({"analytic", "mc", "both"}));
        app->add_option("--drops", drops, "Monte Carlo drops");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--threads", threads, "worker threads (0 = hardware)");
        app->add_flag("--no-timestamp", no_timestamp,
                      "omit the generated-at header and zero the wall-time column");
    }

    RunConfig load() const {
        RunConfig cfg = config_path.empty() ? RunConfig{}
                                            : fdcov::cli::load_config_file(config_path);
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!format.empty())
            cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        if (!method.empty()) cfg.method = fdcov::cli::run_method_from_name(method);
        if (drops >= 0) cfg.drops = drops;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (threads > 0) cfg.threads = threads;
        if (no_timestamp) cfg.timestamp = false;
        cfg.validate();
        return cfg;
    }
};

int write_result(const RunConfig& cfg, const fdcov::cli::SweepResult& result) {
    std::ostringstream body;
    if (cfg.format == OutputFormat::Json)
        fdcov::cli::write_json(body, result, cfg.timestamp);
    else
        fdcov::cli::write_csv(body, result, cfg.timestamp);
    if (cfg.out_path.empty()) {
        std::cout << body.str();
        return 0;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
        emit_error("cannot open output path: " + cfg.out_path, "out", 0);
        return 1;
    }
    out << body.str();
    return 0;
}

int cmd_run_sweep(const CommonFlags& flags, bool require_axis) {
    RunConfig cfg = flags.load();
    if (require_axis && cfg.sweep.empty())
        throw ConfigError("sweep requires a 'sweep' axis in [cli]", "sweep");
    if (!require_axis) cfg.sweep.clear();  // coverage = single point
    const auto result = fdcov::cli::run_sweep(cfg);
    return write_result(cfg, result);
}

int cmd_solve(const CommonFlags& flags, const std::string& target, const std::string& variant) {
    RunConfig cfg = flags.load();
    if (!cfg.assume_perfect_backhaul)
        throw ConfigError(
            "solve assumes perfect backhaul coverage; acknowledge with "
            "assume_perfect_backhaul = true in [analytic-coverage]",
            "assume_perfect_backhaul");
    const bool approx = variant == "approx";
    const fdcov::DerivedModel d = fdcov::derive_model(cfg.params);
    const fdcov::analytic::FractionResult fr =
        target == "q_star" ? fdcov::analytic::optimal_fraction(d, cfg.params, approx)
                           : fdcov::analytic::balanced_fraction(d, cfg.params, approx);

    nlohmann::json j;
    j["target"] = target;
    j["variant"] = variant;
    j["value"] = fr.value;
    j["clamped"] = fr.clamped;
    j["unclamped"] = fr.unclamped;

    // verification at the returned fraction
    fdcov::NetworkParams at = cfg.params;
    at.q = fr.value;
    const fdcov::DerivedModel dat = fdcov::derive_model(at);
    const double ci = approx ? fdcov::analytic::access_coverage_approx(dat, at, fdcov::Mode::IBFD)
                             : fdcov::analytic::access_coverage_rayleigh(dat, at, fdcov::Mode::IBFD);
    const double co = approx ? fdcov::analytic::access_coverage_approx(dat, at, fdcov::Mode::OBFD)
                             : fdcov::analytic::access_coverage_rayleigh(dat, at, fdcov::Mode::OBFD);
    j["coverage_ibfd_at_value"] = ci;
    j["coverage_obfd_at_value"] = co;
    j["coverage_user_at_value"] = fr.value * ci + (1.0 - fr.value) * co;

    if (target == "q_star") {
        // coarse grid check that no grid point beats the closed form
        double best_q = 0.0, best_c = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double q = i / 1000.0;
            const double c =
                fdcov::analytic::mixture_coverage_perfect_backhaul(q, cfg.params, approx);
            if (c > best_c) {
                best_c = c;
                best_q = q;
            }
        }
        j["grid_best_q"] = best_q;
        j["grid_best_coverage"] = best_c;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const CommonFlags& flags, const std::string& records_path) {
    RunConfig cfg = flags.load();
    cfg.method = RunMethod::MonteCarlo;
    cfg.sweep.clear();

    fdcov::mc::EstimateOptions opt;
    opt.region_radius = cfg.region_radius;
    opt.threads = cfg.threads;
    std::ofstream records;
    if (!records_path.empty()) {
        records.open(records_path, std::ios::binary);
        if (!records) {
            emit_error("cannot open records path: " + records_path, "records", 0);
            return 1;
        }
        opt.on_drop = [&records](long i, const fdcov::mc::DropResult& r) {
            fdcov::mc::write_drop_record(records, i, r);
        };
    }
    const fdcov::CoverageReport rep =
        fdcov::mc::estimate_coverage(cfg.params, cfg.mitigation, cfg.drops, cfg.seed, opt);

    fdcov::cli::SweepResult result;
    fdcov::cli::SweepRow row;
    row.method = "mc";
    row.report = rep;
    result.rows.push_back(row);
    return write_result(cfg, result);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate coverage for full-duplex wireless-backhauled small cells"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* coverage = app.add_subcommand("coverage", "evaluate the configured single point");
    flags.attach(coverage);

    auto* sweep = app.add_subcommand("sweep", "run the configured parameter sweep");
    flags.attach(sweep);

    std::string target = "q_star";
    std::string variant = "approx";
    auto* solve = app.add_subcommand("solve", "closed-form balanced/optimal in-band fraction");
    flags.attach(solve);
    solve->add_option("--target", target, "q_star|q_balance")
        ->check(CLI::IsMember({"q_star", "q_balance"}));
    solve->add_option("--variant", variant, "exact|approx")
        ->check(CLI::IsMember({"exact", "approx"}));

    std::string records_path;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo only, optional drop records");
    flags.attach(simulate);
    simulate->add_option("--records", records_path, "line-delimited drop records (JSON lines)");

    auto* validate = app.add_subcommand("validate-config", "parse and validate a config file");
    flags.attach(validate);

    CLI11_PARSE(app, argc, argv);

    try {
        if (coverage->parsed()) return cmd_run_sweep(flags, false);
        if (sweep->parsed()) return cmd_run_sweep(flags, true);
        if (solve->parsed()) return cmd_solve(flags, target, variant);
        if (simulate->parsed()) return cmd_simulate(flags, records_path);
        if (validate->parsed()) {
            flags.load();
            std::cout << "ok\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        emit_error(e.what(), e.field, e.line);
        return 2;
    } catch (const std::exception& e) {
        emit_error(e.what(), "", 0);
        return 1;
    }
    return 0;
}
