#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdcov/network_model.hpp"
#include "fdcov/report.hpp"

namespace fdcov::mc {

enum class Scheme {
    None,
    InterferenceRejection,
    BiaServingOnly,
    BiaAllCns,
    DistributedModeSelection,
};

const char* scheme_name(Scheme s);
/// Parses the config-file spelling ("none", "interference-rejection", ...).
Scheme scheme_from_name(const std::string& name);

struct MitigationConfig {
    Scheme scheme = Scheme::None;
    double tau = 10.0;  ///< threshold of the distributed selection rule
    bool pilot_contamination = false;
    /// Thin interferers to cells whose own backhaul link clears its
    /// threshold this slot (default: the granted-stream flag alone).
    bool gated_interferers = false;

    void validate() const;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// One sampled realization: node positions plus every channel draw the
/// evaluation needs. Pairwise small-cell channels are drawn lazily from
/// order-independent substreams keyed on (seed, link), so sparse and dense
/// evaluations of the same drop see identical channels.
struct Topology {
    double region_radius = 0.0;
    std::uint64_t seed = 0;

    std::vector<Vec2> cn_pos;
    std::vector<Vec2> sbs_pos;

    std::vector<double> shadow_sbs_user;  ///< per SBS, link to the origin user
    std::vector<double> fade_sbs_user;    ///< Gamma(k_user) power per SBS
    std::vector<double> shadow_cn_user;   ///< per CN (hub links carry no fading)
    std::vector<double> shadow_cn_sbs;    ///< [cn * n_sbs + sbs]

    std::vector<std::uint8_t> mode_ibfd;  ///< Bernoulli(q) marks
    std::vector<int> serving_cn;          ///< per SBS, -1 until associated
    std::vector<int> cn_load;             ///< per CN, set by associate()
    std::vector<std::uint8_t> served;     ///< backhaul stream granted this drop
    int serving_sbs = -1;                 ///< the origin user's cell

    int n_cn() const { return static_cast<int>(cn_pos.size()); }
    int n_sbs() const { return static_cast<int>(sbs_pos.size()); }
};

/// Thrown by sample_topology when no small cell (or no hub) falls inside the
/// region; callers resample with a fresh sub-seed and count the event.
struct DegenerateTopology {};

struct DropResult {
    double access_sinr_ibfd = 0.0;
    double access_sinr_obfd = 0.0;
    double backhaul_sir_ibfd = 0.0;
    double backhaul_sir_obfd = 0.0;
    double r_su = 0.0;
    double r_cs = 0.0;
    int load_ns = 0;
    double alpha = 0.0;
    double gamma_b_ibfd = 0.0;
    double gamma_b_obfd = 0.0;
    bool mode_is_ibfd = false;
    bool access_ok_ibfd = false;
    bool access_ok_obfd = false;
    bool backhaul_ok_ibfd = false;
    bool backhaul_ok_obfd = false;
};

/// Radius making the interference truncation at the origin negligible.
double default_region_radius(const NetworkParams& p);

Topology sample_topology(const NetworkParams& p, double region_radius, std::uint64_t seed);

/// Strongest-average-power association (path loss x shadowing, no fading)
/// plus per-hub uniform selection of the backhaul-served subset.
void associate(Topology& t, const NetworkParams& p);

DropResult evaluate_drop(const Topology& t, const NetworkParams& p,
                         const MitigationConfig& m);

struct EstimateOptions {
    double region_radius = 0.0;  ///< 0 = default_region_radius(p)
    int threads = 0;             ///< 0 = hardware concurrency
    /// Per-drop tap in drop order; setting it forces a sequential run.
    std::function<void(long, const DropResult&)> on_drop;
};

/// Runs independent drops with per-drop sub-seeds and returns empirical
/// coverage with 95% half-widths. Bit-identical for identical inputs,
/// independent of the thread count.
CoverageReport estimate_coverage(const NetworkParams& p, const MitigationConfig& m,
                                 long drops, std::uint64_t seed,
                                 const EstimateOptions& opt = {});

/// Fraction of drops whose typical cell picks in-band under the threshold
/// rule; positions (and access shadowing when present) only.
double empirical_ibfd_fraction(const NetworkParams& p, double tau, long drops,
                               std::uint64_t seed, double region_radius = 0.0);

/// One drop as a line-delimited record, fields named as in DropResult.
void write_drop_record(std::ostream& os, long index, const DropResult& r);

}  // namespace fdcov::mc
