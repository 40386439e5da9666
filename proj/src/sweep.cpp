#include "fdcov/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "fdcov/analytic.hpp"

namespace fdcov::cli {

namespace {

using json = nlohmann::json;

std::string iso_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

CoverageReport analytic_point(const RunConfig& cfg) {
    NetworkParams p = cfg.params;
    mc::MitigationConfig m = cfg.mitigation;

    if (m.scheme == mc::Scheme::BiaServingOnly || m.scheme == mc::Scheme::BiaAllCns)
        throw std::domain_error("power-control schemes are simulation-only");
    if (m.pilot_contamination)
        throw std::domain_error("pilot contamination is simulation-only");

    DerivedModel d = derive_model(p);
    if (m.scheme == mc::Scheme::DistributedModeSelection) {
        // the rule fixes the in-band fraction; the rest of the model follows it
        p.q = analytic::distributed_mode_fraction(m.tau, d, p);
        d = derive_model(p);
    }

    CoverageReport r;
    r.method = Method::AnalyticExact;
    r.c_access_ibfd =
        m.scheme == mc::Scheme::InterferenceRejection
            ? analytic::access_coverage_interference_rejection(d, p, cfg.quadrature)
            : analytic::access_coverage(Mode::IBFD, d, p, cfg.quadrature);
    r.c_access_obfd = analytic::access_coverage(Mode::OBFD, d, p, cfg.quadrature);
    if (cfg.assume_perfect_backhaul) {
        r.c_backhaul_ibfd = 1.0;
        r.c_backhaul_obfd = 1.0;
    } else {
        const LoadDistribution load = make_load_distribution(d.mean_load);
        r.c_backhaul_ibfd = analytic::backhaul_coverage(Mode::IBFD, d, p, load, cfg.quadrature);
        r.c_backhaul_obfd = analytic::backhaul_coverage(Mode::OBFD, d, p, load, cfg.quadrature);
    }
    r.c_ibfd = r.c_access_ibfd * r.c_backhaul_ibfd;
    r.c_obfd = r.c_access_obfd * r.c_backhaul_obfd;
    r.c_user = p.q * r.c_ibfd + (1.0 - p.q) * r.c_obfd;
    r.error = 5e-5;
    if (m.scheme == mc::Scheme::DistributedModeSelection) r.realized_ibfd_fraction = p.q;
    return r;
}

}  // namespace

std::vector<double> axis_values(const SweepAxis& ax) {
    std::vector<double> v(ax.steps);
    for (int i = 0; i < ax.steps; ++i) {
        const double f = static_cast<double>(i) / (ax.steps - 1);
        v[i] = ax.log_scale
                   ? std::exp(std::log(ax.start) + f * (std::log(ax.stop) - std::log(ax.start)))
                   : ax.start + f * (ax.stop - ax.start);
    }
    return v;
}

CoverageReport evaluate_point(const RunConfig& cfg, RunMethod method, int threads) {
    if (method == RunMethod::Analytic) return analytic_point(cfg);
    mc::EstimateOptions opt;
    opt.region_radius = cfg.region_radius;
    opt.threads = threads;
    return mc::estimate_coverage(cfg.params, cfg.mitigation, cfg.drops, cfg.seed, opt);
}

SweepResult run_sweep(const RunConfig& cfg) {
    cfg.validate();
    SweepResult result;
    for (const auto& ax : cfg.sweep) result.axis_names.push_back(ax.parameter);

    // the point grid (cartesian when two axes are set)
    std::vector<std::vector<double>> points;
    if (cfg.sweep.empty()) {
        points.push_back({});
    } else if (cfg.sweep.size() == 1) {
        for (double v : axis_values(cfg.sweep[0])) points.push_back({v});
    } else {
        for (double v1 : axis_values(cfg.sweep[0]))
            for (double v2 : axis_values(cfg.sweep[1])) points.push_back({v1, v2});
    }

    std::vector<RunMethod> methods;
    if (cfg.method == RunMethod::Both)
        methods = {RunMethod::Analytic, RunMethod::MonteCarlo};
    else
        methods = {cfg.method};

    struct Task {
        std::size_t point;
        RunMethod method;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (RunMethod m : methods) tasks.push_back({i, m});

    result.rows.resize(tasks.size());
    int pool = cfg.threads > 0 ? cfg.threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    pool = std::max(1, std::min<int>(pool, 32));
    const int inner_threads = tasks.size() > 1 ? 1 : pool;

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= tasks.size()) return;
            const Task& task = tasks[k];
            SweepRow& row = result.rows[k];
            row.values = points[task.point];
            row.method = task.method == RunMethod::Analytic ? "analytic" : "mc";
            RunConfig local = cfg;
            for (std::size_t a = 0; a < row.values.size(); ++a)
                apply_parameter(local.params, local.mitigation, cfg.sweep[a].parameter,
                                row.values[a]);
            const auto t0 = std::chrono::steady_clock::now();
            try {
                row.report = evaluate_point(local, task.method, inner_threads);
            } catch (const std::exception& e) {
                row.failed = true;
                row.error_message = e.what();
            }
            row.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    if (tasks.size() == 1 || pool == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < std::min<int>(pool, static_cast<int>(tasks.size())); ++i)
            threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return result;
}

namespace {

const char* kProbColumns[] = {"c_access_ibfd", "c_access_obfd", "c_backhaul_ibfd",
                              "c_backhaul_obfd", "c_ibfd", "c_obfd", "c_user"};

std::vector<double> prob_values(const CoverageReport& r) {
    return {r.c_access_ibfd, r.c_access_obfd, r.c_backhaul_ibfd, r.c_backhaul_obfd,
            r.c_ibfd, r.c_obfd, r.c_user};
}

}  // namespace

void write_csv(std::ostream& os, const SweepResult& r, bool timestamp) {
    os << "# fdcov sweep\n";
    if (timestamp) os << "# generated " << iso_now() << "\n";
    for (const auto& name : r.axis_names) os << name << ",";
    os << "method";
    for (const char* c : kProbColumns) os << "," << c;
    os << ",error,wall_s,status\n";
    for (const auto& row : r.rows) {
        for (double v : row.values) os << fmt(v) << ",";
        os << row.method;
        if (row.failed) {
            for (std::size_t i = 0; i < 7; ++i) os << ",nan";
            os << ",nan," << (timestamp ? fmt(row.wall_seconds) : std::string("0"))
               << ",failed: " << row.error_message << "\n";
        } else {
            for (double v : prob_values(row.report)) os << "," << fmt(v);
            os << "," << fmt(row.report.error) << ","
               << (timestamp ? fmt(row.wall_seconds) : std::string("0")) << ",ok\n";
        }
    }
}

void write_json(std::ostream& os, const SweepResult& r, bool timestamp) {
    json out;
    if (timestamp) out["generated"] = iso_now();
    out["axes"] = r.axis_names;
    json rows = json::array();
    for (const auto& row : r.rows) {
        json j;
        for (std::size_t a = 0; a < row.values.size(); ++a) j[r.axis_names[a]] = row.values[a];
        j["method"] = row.method;
        if (row.failed) {
            j["status"] = "failed: " + row.error_message;
        } else {
            const auto vals = prob_values(row.report);
            for (std::size_t i = 0; i < vals.size(); ++i) j[kProbColumns[i]] = vals[i];
            j["error"] = row.report.error;
            j["status"] = "ok";
            if (row.report.method == Method::MonteCarlo) {
                j["drops"] = row.report.drops;
                j["resampled"] = row.report.resampled;
            }
            if (row.report.realized_ibfd_fraction >= 0.0)
                j["realized_ibfd_fraction"] = row.report.realized_ibfd_fraction;
        }
        j["wall_s"] = timestamp ? row.wall_seconds : 0.0;
        rows.push_back(std::move(j));
    }
    out["rows"] = std::move(rows);
    os << out.dump(2) << "\n";
}

}  // namespace fdcov::cli
