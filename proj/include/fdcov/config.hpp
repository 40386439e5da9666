#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdcov/montecarlo.hpp"
#include "fdcov/network_model.hpp"
#include "fdcov/quadrature.hpp"

namespace fdcov::cli {

/// Config problems carry the offending field and line so callers can emit a
/// machine-readable error record.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, std::string field_name, int line_no = 0)
        : std::runtime_error(msg), field(std::move(field_name)), line(line_no) {}
    std::string field;
    int line;
};

enum class RunMethod { Analytic, MonteCarlo, Both };
enum class OutputFormat { Csv, Json };

const char* run_method_name(RunMethod m);
RunMethod run_method_from_name(const std::string& s);

struct SweepAxis {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
    bool log_scale = false;
};

/// Everything one invocation needs. Defaults reproduce the reference setup,
/// so an empty config is a valid baseline run.
struct RunConfig {
    NetworkParams params;
    mc::MitigationConfig mitigation;
    QuadratureSettings quadrature;

    RunMethod method = RunMethod::Analytic;
    long drops = 20000;
    std::uint64_t seed = 1;
    double region_radius = 0.0;  ///< 0 = derived from intensities
    int threads = 0;             ///< 0 = hardware concurrency
    bool assume_perfect_backhaul = false;

    std::vector<SweepAxis> sweep;  ///< 0 (single point), 1 or 2 axes
    std::string out_path;          ///< empty = stdout
    OutputFormat format = OutputFormat::Csv;
    bool timestamp = true;

    void validate() const;  ///< throws ConfigError
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Parameters a sweep may vary.
const std::vector<std::string>& sweep_parameter_whitelist();
void apply_parameter(NetworkParams& p, mc::MitigationConfig& m, const std::string& name,
                     double value);

}  // namespace fdcov::cli
