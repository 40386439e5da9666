// Acceptance gate: every release-blocking check in one binary, one verdict
// line per criterion. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "fdcov/analytic.hpp"
#include "fdcov/montecarlo.hpp"
#include "fdcov/specfun.hpp"

using namespace fdcov;
namespace an = fdcov::analytic;
namespace sim = fdcov::mc;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void verdict(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

CoverageReport analytic_full(const NetworkParams& p) {
    const DerivedModel d = derive_model(p);
    const LoadDistribution load = make_load_distribution(d.mean_load);
    return an::rate_coverage(d, p, load);
}

// ---------------------------------------------------------------- criterion 1
void criterion_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    NetworkParams p;  // beta=4, lc'=10, ls'=50, Pc=10, Ps=2, M=500, S=50,
                      // R=1, xi=120dB, mu=1, sigma=2, k_user=2, k_sbs=0.5, q=0.5
    const CoverageReport a = analytic_full(p);
    sim::MitigationConfig none;
    const CoverageReport m = sim::estimate_coverage(p, none, 20000, 424242);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double di = std::abs(a.c_ibfd - m.c_ibfd);
    const double dob = std::abs(a.c_obfd - m.c_obfd);
    const double du = std::abs(a.c_user - m.c_user);
    const bool pass = di <= 0.03 && dob <= 0.03 && du <= 0.03 && seconds <= 600.0;
    verdict(1, "analytic-mc agreement at the reference setup", pass,
            fmt("|dC_I|=%.4f |dC_O|=%.4f |dC_u|=%.4f (<=0.03), %.0f s (<=600)", di, dob, du,
                seconds));
}

// ---------------------------------------------------------------- criterion 2
double balance_root(double lambda_s_raw) {
    NetworkParams p;
    p.lambda_s_raw = lambda_s_raw;
    const auto gap = [&p](double q) {
        p.q = q;
        const CoverageReport r = analytic_full(p);
        return r.c_ibfd - r.c_obfd;
    };
    double lo = 0.02, hi = 0.98;
    double glo = gap(lo);
    for (int i = 0; i < 13; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if ((g > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void criterion_balance_points() {
    const double q50 = balance_root(50.0);
    const double q100 = balance_root(100.0);
    const bool pass = q50 >= 0.35 && q50 <= 0.55 && q100 >= 0.60 && q100 <= 0.80;
    verdict(2, "per-mode coverage balance points", pass,
            fmt("root(ls'=50)=%.3f in [0.35,0.55]; root(ls'=100)=%.3f in [0.60,0.80]", q50,
                q100));
}

// ---------------------------------------------------------------- criterion 3
void criterion_trends() {
    bool pass = true;
    std::string notes;

    // own-fraction monotonicity
    {
        NetworkParams p;
        double prev_i = 2.0, prev_o = -1.0;
        for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            p.q = q;
            const CoverageReport r = analytic_full(p);
            if (r.c_ibfd > prev_i + 1e-6) pass = false;  // c_I falls as q grows
            if (r.c_obfd < prev_o - 1e-6) pass = false;  // c_O falls as 1-q grows
            prev_i = r.c_ibfd;
            prev_o = r.c_obfd;
        }
        notes += "own-fraction monotone; ";
    }

    // density grid: c_O monotone, c_I single-peaked
    {
        NetworkParams p;
        std::vector<double> ci, co;
        for (int i = 0; i < 10; ++i) {
            p.lambda_s_raw =
                std::exp(std::log(10.0) + i * (std::log(1000.0) - std::log(10.0)) / 9.0);
            const CoverageReport r = analytic_full(p);
            ci.push_back(r.c_ibfd);
            co.push_back(r.c_obfd);
        }
        for (std::size_t i = 1; i < co.size(); ++i)
            if (co[i] > co[i - 1] + 1e-6) pass = false;
        int sign_changes = 0;
        int last_sign = 0;
        for (std::size_t i = 1; i < ci.size(); ++i) {
            const double diff = ci[i] - ci[i - 1];
            if (std::abs(diff) < 1e-6) continue;
            const int s = diff > 0.0 ? 1 : -1;
            if (last_sign != 0 && s != last_sign) ++sign_changes;
            last_sign = s;
        }
        if (sign_changes != 1) pass = false;
        notes += fmt("density: c_O monotone, c_I sign changes=%d; ", sign_changes);
    }

    // cancellation sweep: c_I never degrades, c_O untouched
    {
        NetworkParams p;
        double prev_i = -1.0;
        double co_min = 2.0, co_max = -1.0;
        for (double xi : {60.0, 80.0, 100.0, 120.0, 140.0}) {
            p.xi_db = xi;
            const CoverageReport r = analytic_full(p);
            if (r.c_ibfd < prev_i - 1e-9) pass = false;
            prev_i = r.c_ibfd;
            co_min = std::min(co_min, r.c_obfd);
            co_max = std::max(co_max, r.c_obfd);
        }
        if (co_max - co_min > 0.02) pass = false;
        notes += fmt("cancellation: c_I non-decreasing, c_O span=%.2e", co_max - co_min);
    }

    verdict(3, "coverage trends across fraction, density, cancellation", pass, notes);
}

// ---------------------------------------------------------------- criterion 4
void criterion_cross_checks() {
    bool pass = true;
    std::string notes;

    // inversion path against the Rayleigh closed form
    {
        NetworkParams p;
        p.k_user = 1.0;
        p.n0 = 0.0;
        const DerivedModel d = derive_model(p);
        double worst = 0.0;
        for (Mode mode : {Mode::IBFD, Mode::OBFD}) {
            const double closed = an::access_coverage_rayleigh(d, p, mode);
            const double inverted = an::access_coverage(mode, d, p);
            worst = std::max(worst, std::abs(closed - inverted));
        }
        if (worst > 1e-3) pass = false;
        notes += fmt("closed-vs-inversion max|d|=%.1e (<=1e-3); ", worst);
    }

    // cosecant form against the Beta-function form
    {
        double worst = 0.0;
        for (double beta : {3.0, 4.0, 5.0}) {
            NetworkParams p;
            p.beta = beta;
            p.k_sbs = 1.0;
            const DerivedModel d = derive_model(p);
            const double delta = 2.0 / beta;
            for (double t : {0.1, 1.0, 10.0}) {
                const double general =
                    std::exp(-kPi * d.lambda_bar_si *
                             an::sbs_sbs_exponent_coefficient(1.0, beta) *
                             std::pow(t * p.p_s * p.theta_sbs(), delta));
                worst =
                    std::max(worst, std::abs(general - an::laplace_sbs_sbs(t, d, p)));
            }
        }
        if (worst > 1e-10) pass = false;
        notes += fmt("coefficient forms max|d|=%.1e (<=1e-10); ", worst);
    }

    // per-drop stream-share identity, exactly
    {
        NetworkParams p;
        sim::MitigationConfig none;
        const double radius = sim::default_region_radius(p);
        long checked = 0;
        bool exact = true;
        for (int i = 0; i < 2000; ++i) {
            sim::Topology t = sim::sample_topology(p, radius, 900000 + i);
            sim::associate(t, p);
            const sim::DropResult r = sim::evaluate_drop(t, p, none);
            if (r.alpha != std::min(1.0, static_cast<double>(p.s_max) / r.load_ns))
                exact = false;
            std::vector<int> served_per_cn(t.n_cn(), 0);
            for (int s = 0; s < t.n_sbs(); ++s)
                served_per_cn[t.serving_cn[s]] += t.served[s];
            for (int c = 0; c < t.n_cn(); ++c)
                if (served_per_cn[c] != std::min(t.cn_load[c], p.s_max)) exact = false;
            ++checked;
        }
        if (!exact) pass = false;
        notes += fmt("stream-share identity exact on %ld drops", checked);
    }

    verdict(4, "closed-form cross-checks", pass, notes);
}

// ---------------------------------------------------------------- criterion 5
void criterion_optimizers() {
    bool pass = true;
    std::string notes;

    NetworkParams p;
    p.k_user = 1.0;
    p.n0 = 0.0;
    const DerivedModel d = derive_model(p);

    for (bool approx : {true, false}) {
        const auto qs = an::optimal_fraction(d, p, approx);
        const double at = an::mixture_coverage_perfect_backhaul(qs.value, p, approx);
        double best = -1.0;
        for (int i = 0; i <= 1000; ++i)
            best = std::max(best,
                            an::mixture_coverage_perfect_backhaul(i / 1000.0, p, approx));
        if (at < best - 1e-9) pass = false;
        notes += fmt("%s q*=%.4f beats the 0.001 grid; ", approx ? "approx" : "exact",
                     qs.value);
    }

    // balanced fraction with no hub offset at unit target rate
    {
        NetworkParams pz = p;
        pz.p_c = 1e-30;
        const DerivedModel dz = derive_model(pz);
        const auto fr = an::balanced_fraction(dz, pz, true);
        if (std::abs(fr.value - 0.75) > 1e-12) pass = false;
        notes += fmt("A=0 balance=%.12f (=0.75); ", fr.value);
    }

    // symmetric degenerate optimum
    {
        NetworkParams pz = p;
        pz.p_c = 1e-30;
        DerivedModel dz = derive_model(pz);
        dz.gamma_a_obfd = dz.gamma_a_ibfd;
        const auto fr = an::optimal_fraction(dz, pz, true);
        if (std::abs(fr.value - 0.5) > 1e-9) pass = false;
        notes += fmt("symmetric q*=%.9f (=0.5)", fr.value);
    }

    verdict(5, "closed-form fraction optimizers", pass, notes);
}

// ---------------------------------------------------------------- criterion 6
void criterion_distributed_fraction() {
    NetworkParams p;  // path-loss-only field, as the rule's derivation assumes
    p.shadow_mu = 0.0;
    p.shadow_sigma = 0.0;
    const DerivedModel d = derive_model(p);
    bool pass = true;
    std::string notes;
    for (double tau : {1.0, 10.0, 100.0}) {
        const double expect = an::distributed_mode_fraction(tau, d, p);
        const double got = sim::empirical_ibfd_fraction(p, tau, 100000, 90210);
        if (std::abs(got - expect) > 0.01) pass = false;
        notes += fmt("tau=%g: %.4f vs %.4f; ", tau, got, expect);
    }
    verdict(6, "distributed selection matches its closed form (1e5 drops)", pass, notes);
}

// ---------------------------------------------------------------- criterion 7
void criterion_mitigation_ordering() {
    bool pass = true;
    std::string notes;
    double ir_gain_prev = -1.0;
    for (double pc : {10.0, 20.0}) {
        NetworkParams p;
        p.lambda_c_raw = 20.0;
        p.lambda_s_raw = 100.0;  // the dense regime, where power amplifies the gains
        p.p_c = pc;
        sim::MitigationConfig none, bia, ir;
        bia.scheme = sim::Scheme::BiaServingOnly;
        ir.scheme = sim::Scheme::InterferenceRejection;
        const long drops = 30000;
        const std::uint64_t seed = 5150;  // matched across schemes
        const CoverageReport rn = sim::estimate_coverage(p, none, drops, seed);
        const CoverageReport rb = sim::estimate_coverage(p, bia, drops, seed);
        const CoverageReport ri = sim::estimate_coverage(p, ir, drops, seed);
        const double noise = std::max({rn.ci_half_user, rb.ci_half_user, ri.ci_half_user});
        if (!(ri.c_user >= rb.c_user - noise)) pass = false;
        if (!(rb.c_user >= rn.c_user - noise)) pass = false;
        const double gain = ri.c_user - rn.c_user;
        if (ir_gain_prev >= 0.0 && !(gain > ir_gain_prev)) pass = false;
        notes += fmt("Pc=%g: none=%.4f bia=%.4f ir=%.4f gain=%.4f; ", pc, rn.c_user,
                     rb.c_user, ri.c_user, gain);
        ir_gain_prev = gain;
    }
    verdict(7, "mitigation ordering and its power trend", pass, notes);
}

// ---------------------------------------------------------------- criterion 8
void criterion_property_suites() {
    bool pass = true;
    std::string notes;

    // special-function oracle spot values (10x the configured tolerances)
    {
        double worst = 0.0;
        worst = std::max(worst,
                         std::abs(gauss_2f1(1.0, -0.5, 0.5, -1.0) - (1.0 + kPi / 4.0)));
        worst = std::max(worst, std::abs(upper_inc_gamma(1.0, 2.0) - std::exp(-2.0)));
        worst = std::max(worst, std::abs(upper_inc_gamma(0.5, 0.0) - std::sqrt(kPi)));
        worst = std::max(worst, std::abs(upper_inc_gamma(-0.5, 1.0) - 0.1781477118));
        worst = std::max(worst, std::abs(beta_fn(1.5, -0.5) + kPi));
        if (worst > 1e-5) pass = false;
        notes += fmt("specfun spot values max|d|=%.1e; ", worst);

        CharacteristicFunction expo;
        expo.eval = [](double w) { return 1.0 / std::complex<double>(1.0, -w); };
        expo.nonnegative = true;
        const double f1 = gil_pelaez_cdf(expo, 1.0);
        CharacteristicFunction gam;
        gam.eval = [](double w) {
            return std::pow(std::complex<double>(1.0, -0.5 * w), -2.0);
        };
        gam.nonnegative = true;
        const double f2 = gil_pelaez_cdf(gam, 1.0);
        const double e1 = std::abs(f1 - (1.0 - std::exp(-1.0)));
        const double e2 = std::abs(f2 - (1.0 - 3.0 * std::exp(-2.0)));
        if (e1 > 1e-5 || e2 > 1e-5) pass = false;
        notes += fmt("inversion vs CDFs d=%.1e/%.1e; ", e1, e2);
    }

    // load pmf mass and mean
    {
        const LoadDistribution ld = make_load_distribution(5.0);
        double sum = 0.0, mean = 0.0;
        for (int n = 0; n <= ld.n_max; ++n) {
            sum += ld.pmf[n];
            mean += n * ld.pmf[n];
        }
        if (sum < 1.0 - 1e-6 || std::abs(mean - 5.0) / 5.0 > 1e-3) pass = false;
        notes += fmt("load pmf mass=%.8f mean=%.4f; ", sum, mean);
    }

    // displacement equivalence in the sampled path
    {
        NetworkParams shadowed;
        NetworkParams scaled;
        scaled.shadow_mu = 0.0;
        scaled.shadow_sigma = 0.0;
        scaled.lambda_c_raw *= std::exp(1.0);
        scaled.lambda_s_raw *= std::exp(1.0);
        sim::MitigationConfig none;
        sim::EstimateOptions opt;
        opt.region_radius = sim::default_region_radius(shadowed);
        const CoverageReport a = sim::estimate_coverage(shadowed, none, 8000, 606, opt);
        const CoverageReport b = sim::estimate_coverage(scaled, none, 8000, 707, opt);
        const double worst = std::max({std::abs(a.c_ibfd - b.c_ibfd),
                                       std::abs(a.c_obfd - b.c_obfd),
                                       std::abs(a.c_user - b.c_user)});
        if (worst > 0.03) pass = false;
        notes += fmt("displacement max|d|=%.4f (<=0.03)", worst);
    }

    verdict(8, "property suites", pass, notes);
}

}  // namespace

int main() {
    std::printf("acceptance run: dual-path coverage engine\n");
    criterion_agreement();
    criterion_balance_points();
    criterion_trends();
    criterion_cross_checks();
    criterion_optimizers();
    criterion_distributed_fraction();
    criterion_mitigation_ordering();
    criterion_property_suites();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}
