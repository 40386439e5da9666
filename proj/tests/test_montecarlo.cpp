#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fdcov/analytic.hpp"
#include "fdcov/montecarlo.hpp"

using namespace fdcov;
namespace sim = fdcov::mc;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool reports_identical(const CoverageReport& a, const CoverageReport& b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

// hand-built drop: one cell at (1,0), one hub at (0,1), unit channels
sim::Topology toy_topology() {
    sim::Topology t;
    t.region_radius = 2.0;
    t.seed = 7;
    t.cn_pos = {{0.0, 1.0}};
    t.sbs_pos = {{1.0, 0.0}};
    t.shadow_sbs_user = {1.0};
    t.fade_sbs_user = {1.0};
    t.shadow_cn_user = {1.0};
    t.shadow_cn_sbs = {1.0};
    t.mode_ibfd = {1};
    t.serving_cn = {0};
    t.cn_load = {1};
    t.served = {1};
    t.serving_sbs = 0;
    return t;
}

}  // namespace

TEST_SUITE_BEGIN("montecarlo-sim");

TEST_CASE("sampling is deterministic and Poisson-distributed") {
    NetworkParams p;
    const double radius = sim::default_region_radius(p);
    CHECK(radius == doctest::Approx(5.0 / std::sqrt(kPi * 10.0)).epsilon(1e-12));

    const sim::Topology a = sim::sample_topology(p, radius, 123);
    const sim::Topology b = sim::sample_topology(p, radius, 123);
    REQUIRE(a.n_sbs() == b.n_sbs());
    REQUIRE(a.n_cn() == b.n_cn());
    for (int i = 0; i < a.n_sbs(); ++i) {
        CHECK(a.sbs_pos[i].x == b.sbs_pos[i].x);
        CHECK(a.shadow_sbs_user[i] == b.shadow_sbs_user[i]);
    }

    double mean_mode = 0.0;
    const int drops = 3000;
    long total_sbs = 0;
    for (int i = 0; i < drops; ++i) {
        const sim::Topology t = sim::sample_topology(p, radius, 1000 + i);
        total_sbs += t.n_sbs();
        for (auto m : t.mode_ibfd) mean_mode += m;
    }
    const double mean_sbs = static_cast<double>(total_sbs) / drops;
    mean_mode /= static_cast<double>(total_sbs);
    const double expect_sbs = p.lambda_s_raw * kPi * radius * radius;
    CHECK(mean_sbs == doctest::Approx(expect_sbs).epsilon(0.02));
    CHECK(mean_mode == doctest::Approx(p.q).epsilon(0.02));
}

TEST_CASE("association: nearest under flat shadowing, single hub, stream caps") {
    NetworkParams p;
    p.shadow_sigma = 0.0;
    p.shadow_mu = 0.0;
    sim::Topology t = sim::sample_topology(p, 1.0, 5);
    sim::associate(t, p);

    double best = 1e300;
    int nearest = -1;
    for (int i = 0; i < t.n_sbs(); ++i) {
        const double r = std::hypot(t.sbs_pos[i].x, t.sbs_pos[i].y);
        if (r < best) {
            best = r;
            nearest = i;
        }
    }
    CHECK(t.serving_sbs == nearest);

    // a lone hub collects every cell, and stream grants respect the cap
    NetworkParams sparse = p;
    sparse.lambda_c_raw = 0.05;
    sparse.s_max = 10;
    for (std::uint64_t seed = 20; seed < 40; ++seed) {
        sim::Topology ts;
        try {
            ts = sim::sample_topology(sparse, 1.0, seed);
        } catch (const sim::DegenerateTopology&) {
            continue;
        }
        sim::associate(ts, sparse);
        if (ts.n_cn() != 1) continue;
        long served = 0;
        for (int i = 0; i < ts.n_sbs(); ++i) {
            CHECK(ts.serving_cn[i] == 0);
            served += ts.served[i];
        }
        CHECK(ts.cn_load[0] == ts.n_sbs());
        CHECK(served == std::min<long>(ts.n_sbs(), sparse.s_max));
    }
}

TEST_CASE("realized loads follow the cell-load pmf") {
    // flat shadowing: the gamma-cell load law describes nearest-point
    // association in a single PPP; per-link shadowing disperses loads
    NetworkParams p;
    p.shadow_sigma = 0.0;
    p.shadow_mu = 0.0;
    const double radius = sim::default_region_radius(p);
    const DerivedModel d = derive_model(p);
    std::vector<double> hist(512, 0.0);
    double samples = 0.0;
    for (int i = 0; i < 10000; ++i) {
        sim::Topology t = sim::sample_topology(p, radius, 50000 + i);
        sim::associate(t, p);
        for (int j = 0; j < t.n_cn(); ++j) {
            // interior hubs only: the rim is load-starved by truncation
            if (std::hypot(t.cn_pos[j].x, t.cn_pos[j].y) > 0.5 * radius) continue;
            const int n = std::min<int>(t.cn_load[j], 511);
            hist[n] += 1.0;
            samples += 1.0;
        }
    }
    REQUIRE(samples > 10000.0);
    double tv = 0.0;
    for (int n = 0; n < 512; ++n) {
        const double expect = load_pmf(d.mean_load, n);
        tv += 0.5 * std::abs(hist[n] / samples - expect);
    }
    CHECK(tv < 0.05);
}

TEST_CASE("hand-built drop reproduces the single-interferer arithmetic") {
    NetworkParams p;
    p.n0 = 0.0;
    const sim::Topology t = toy_topology();
    sim::MitigationConfig none;
    const sim::DropResult r = sim::evaluate_drop(t, p, none);
    // only interference at the user is the full-power hub at distance 1
    CHECK(r.access_sinr_ibfd == doctest::Approx(p.p_s / p.p_c).epsilon(1e-12));
    CHECK(r.alpha == doctest::Approx(1.0));
    CHECK(r.load_ns == 1);
    // out-of-band access sees no interferer at all
    CHECK(r.access_sinr_obfd > 1e200);

    sim::MitigationConfig ir;
    ir.scheme = sim::Scheme::InterferenceRejection;
    const sim::DropResult rr = sim::evaluate_drop(t, p, ir);
    CHECK(rr.access_sinr_ibfd > 1e200);  // the only hub is the serving one
}

TEST_CASE("estimate_coverage is deterministic and thread-invariant") {
    NetworkParams p;
    sim::MitigationConfig none;
    sim::EstimateOptions one_thread;
    one_thread.threads = 1;
    sim::EstimateOptions two_threads;
    two_threads.threads = 2;
    const CoverageReport a = sim::estimate_coverage(p, none, 400, 9, one_thread);
    const CoverageReport b = sim::estimate_coverage(p, none, 400, 9, two_threads);
    const CoverageReport c = sim::estimate_coverage(p, none, 400, 9, one_thread);
    CHECK(reports_identical(a, b));
    CHECK(reports_identical(a, c));
    CHECK(a.c_ibfd == doctest::Approx(a.c_access_ibfd * a.c_backhaul_ibfd).epsilon(1e-12));
    CHECK(a.c_user ==
          doctest::Approx(p.q * a.c_ibfd + (1.0 - p.q) * a.c_obfd).epsilon(1e-12));
    CHECK(a.drops == 400);
}

TEST_CASE("per-drop invariants: stream shares, loads, self-interference ordering") {
    NetworkParams lo_xi;
    lo_xi.xi_db = 60.0;
    NetworkParams hi_xi;
    hi_xi.xi_db = 120.0;
    sim::MitigationConfig none;
    const double radius = sim::default_region_radius(lo_xi);
    for (int i = 0; i < 200; ++i) {
        sim::Topology t = sim::sample_topology(lo_xi, radius, 777000 + i);
        sim::associate(t, lo_xi);
        const sim::DropResult a = sim::evaluate_drop(t, lo_xi, none);
        const sim::DropResult b = sim::evaluate_drop(t, hi_xi, none);
        CHECK(a.load_ns >= 1);
        CHECK(a.alpha ==
              doctest::Approx(std::min(1.0, 50.0 / a.load_ns)).epsilon(1e-15));
        // better cancellation never hurts the in-band backhaul
        CHECK(b.backhaul_sir_ibfd >= a.backhaul_sir_ibfd * (1.0 - 1e-12));
        // out-of-band backhaul ignores the loop-back entirely
        CHECK(b.backhaul_sir_obfd == doctest::Approx(a.backhaul_sir_obfd).epsilon(1e-12));
    }
}

TEST_CASE("interference rejection dominates drop by drop") {
    NetworkParams p;
    sim::MitigationConfig none;
    sim::MitigationConfig ir;
    ir.scheme = sim::Scheme::InterferenceRejection;
    const double radius = sim::default_region_radius(p);
    for (int i = 0; i < 200; ++i) {
        sim::Topology t = sim::sample_topology(p, radius, 31000 + i);
        sim::associate(t, p);
        const sim::DropResult a = sim::evaluate_drop(t, p, none);
        const sim::DropResult b = sim::evaluate_drop(t, p, ir);
        CHECK(b.access_sinr_ibfd >= a.access_sinr_ibfd * (1.0 - 1e-12));
    }
}

TEST_CASE("power control never exceeds the budget and keeps met thresholds met") {
    NetworkParams p;
    sim::MitigationConfig none;
    sim::MitigationConfig bia;
    bia.scheme = sim::Scheme::BiaServingOnly;
    const double radius = sim::default_region_radius(p);
    for (int i = 0; i < 200; ++i) {
        sim::Topology t = sim::sample_topology(p, radius, 62000 + i);
        sim::associate(t, p);
        const sim::DropResult a = sim::evaluate_drop(t, p, none);
        const sim::DropResult b = sim::evaluate_drop(t, p, bia);
        // reduced power can only lower the in-band SIR, and never below the
        // threshold it was designed to hold
        CHECK(b.backhaul_sir_ibfd <= a.backhaul_sir_ibfd * (1.0 + 1e-12));
        if (a.backhaul_ok_ibfd) CHECK(b.backhaul_ok_ibfd);
        if (a.mode_is_ibfd)
            CHECK(b.backhaul_sir_ibfd >=
                  std::min(a.backhaul_sir_ibfd, a.gamma_b_ibfd) * (1.0 - 1e-9));
    }
}

TEST_CASE("power control at every hub helps the typical user's access link") {
    NetworkParams p;
    p.lambda_c_raw = 20.0;
    sim::MitigationConfig none;
    sim::MitigationConfig bia_all;
    bia_all.scheme = sim::Scheme::BiaAllCns;
    sim::EstimateOptions opt;
    const CoverageReport a = sim::estimate_coverage(p, none, 1500, 5, opt);
    const CoverageReport b = sim::estimate_coverage(p, bia_all, 1500, 5, opt);
    CHECK(b.c_user >= a.c_user - 0.02);
    CHECK(b.c_access_ibfd > a.c_access_ibfd);
}

TEST_CASE("displacement equivalence: explicit shadowing vs scaled intensity") {
    NetworkParams shadowed;  // mu=1, sigma=2 defaults
    NetworkParams scaled;
    scaled.shadow_mu = 0.0;
    scaled.shadow_sigma = 0.0;
    scaled.lambda_c_raw = shadowed.lambda_c_raw * std::exp(1.0);
    scaled.lambda_s_raw = shadowed.lambda_s_raw * std::exp(1.0);

    sim::MitigationConfig none;
    sim::EstimateOptions opt;
    opt.region_radius = sim::default_region_radius(shadowed);
    const CoverageReport a = sim::estimate_coverage(shadowed, none, 8000, 17, opt);
    const CoverageReport b = sim::estimate_coverage(scaled, none, 8000, 18, opt);
    CHECK(std::abs(a.c_ibfd - b.c_ibfd) < 0.03);
    CHECK(std::abs(a.c_obfd - b.c_obfd) < 0.03);
    CHECK(std::abs(a.c_user - b.c_user) < 0.03);
}

TEST_CASE("distributed selection matches its closed-form fraction") {
    NetworkParams p;
    p.shadow_mu = 0.0;
    p.shadow_sigma = 0.0;  // the rule is derived for a path-loss-only field
    const DerivedModel d = derive_model(p);
    for (double tau : {1.0, 10.0}) {
        const double expect = analytic::distributed_mode_fraction(tau, d, p);
        const double got = sim::empirical_ibfd_fraction(p, tau, 20000, 4242);
        CHECK(std::abs(got - expect) < 0.015);
    }

    sim::MitigationConfig dist;
    dist.scheme = sim::Scheme::DistributedModeSelection;
    dist.tau = 10.0;
    const CoverageReport rep = sim::estimate_coverage(p, dist, 4000, 11);
    CHECK(rep.realized_ibfd_fraction ==
          doctest::Approx(analytic::distributed_mode_fraction(10.0, d, p)).epsilon(0.08));
}

TEST_CASE("backhaul-gated interferers can only raise the access SINR") {
    NetworkParams p;
    sim::MitigationConfig plain;
    sim::MitigationConfig gated;
    gated.gated_interferers = true;
    const double radius = sim::default_region_radius(p);
    bool thinned_somewhere = false;
    for (int i = 0; i < 100; ++i) {
        sim::Topology t = sim::sample_topology(p, radius, 45000 + i);
        sim::associate(t, p);
        const sim::DropResult a = sim::evaluate_drop(t, p, plain);
        const sim::DropResult b = sim::evaluate_drop(t, p, gated);
        CHECK(b.access_sinr_ibfd >= a.access_sinr_ibfd * (1.0 - 1e-12));
        CHECK(b.access_sinr_obfd >= a.access_sinr_obfd * (1.0 - 1e-12));
        if (b.access_sinr_ibfd > a.access_sinr_ibfd * (1.0 + 1e-9)) thinned_somewhere = true;
    }
    CHECK(thinned_somewhere);
}

TEST_CASE("loose thresholds and many antennas give full coverage") {
    NetworkParams p;
    p.r_th = 1e-9;
    p.m_antennas = 2000000000;
    sim::MitigationConfig none;
    const CoverageReport r = sim::estimate_coverage(p, none, 500, 1);
    CHECK(r.c_user == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a small in-band minority beats a small out-of-band minority") {
    // dense deployment: the few in-band cells escape the majority's co-tier
    // interference on both of their links; the few out-of-band cells do not
    NetworkParams p;
    p.lambda_s_raw = 100.0;
    sim::MitigationConfig none;
    p.q = 0.1;
    const CoverageReport lo = sim::estimate_coverage(p, none, 4000, 33);
    p.q = 0.9;
    const CoverageReport hi = sim::estimate_coverage(p, none, 4000, 34);
    CHECK(lo.c_ibfd > hi.c_obfd + 0.05);
}

TEST_CASE("degenerate regions are resampled and counted") {
    NetworkParams p;
    p.lambda_s_raw = 0.4;  // empty regions are common at this intensity
    p.lambda_c_raw = 0.4;
    sim::MitigationConfig none;
    sim::EstimateOptions opt;
    opt.region_radius = 1.0;
    const CoverageReport rep = sim::estimate_coverage(p, none, 300, 3, opt);
    CHECK(rep.resampled > 0);
    CHECK(rep.drops == 300);
    CHECK(rep.c_user >= 0.0);
    CHECK(rep.c_user <= 1.0);
}

TEST_CASE("drop records are line-delimited with named fields") {
    NetworkParams p;
    sim::MitigationConfig none;
    sim::EstimateOptions opt;
    std::ostringstream os;
    opt.on_drop = [&os](long i, const sim::DropResult& r) {
        sim::write_drop_record(os, i, r);
    };
    sim::estimate_coverage(p, none, 3, 21, opt);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.find("\"access_sinr_ibfd\":") != std::string::npos);
    CHECK(text.find("\"load_ns\":") != std::string::npos);
    CHECK(text.find("\"alpha\":") != std::string::npos);
}

TEST_SUITE_END();
