#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdcov/config.hpp"
#include "fdcov/report.hpp"

namespace fdcov::cli {

struct SweepRow {
    std::vector<double> values;  ///< swept values, axis order
    std::string method;          ///< "analytic" or "mc"
    CoverageReport report;
    bool failed = false;
    std::string error_message;
    double wall_seconds = 0.0;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;
};

/// Evaluates one parameter point with the requested path. The analytic path
/// handles interference rejection and distributed selection; power-control
/// schemes are simulation-only and raise std::domain_error here.
CoverageReport evaluate_point(const RunConfig& cfg, RunMethod method, int threads);

/// Runs the configured sweep (0 axes = a single point). Points are dispatched
/// to a worker pool; rows come back in sweep order, one per method per point,
/// with failures recorded in place rather than aborting the sweep.
SweepResult run_sweep(const RunConfig& cfg);

void write_csv(std::ostream& os, const SweepResult& r, bool timestamp);
void write_json(std::ostream& os, const SweepResult& r, bool timestamp);

/// The sweep grid for one axis (linear or logarithmic spacing).
std::vector<double> axis_values(const SweepAxis& ax);

}  // namespace fdcov::cli
