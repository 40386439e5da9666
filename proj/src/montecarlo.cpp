#include "fdcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "fdcov/rng.hpp"

namespace fdcov::mc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// draw-stream tags; every random quantity of a drop has its own substream
enum Stream : std::uint64_t {
    kCnPositions = 1,
    kSbsPositions,
    kShadowSbsUser,
    kFadeSbsUser,
    kShadowCnUser,
    kShadowCnSbs,
    kModes,
    kServedSubset,
    kShadowSbsSbs,  // pairwise, lazy
    kFadeSbsSbs,    // pairwise, lazy
    kOwnUser,       // per-SBS user placement for the distributed rule
    kPilotReuse,    // per-CN thinning draw
};

double dist(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

double norm(const Vec2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }

void sample_disk(Rand& rng, double radius, std::vector<Vec2>& out, long count) {
    out.resize(count);
    for (long i = 0; i < count; ++i) {
        const double r = radius * std::sqrt(rng.uniform());
        const double a = 2.0 * kPi * rng.uniform();
        out[i] = {r * std::cos(a), r * std::sin(a)};
    }
}

// lazy pairwise channel between transmitting cell x and receiving cell s
double sbs_pair_gain(const Topology& t, const NetworkParams& p, int x, int s) {
    Rand sh = link_rng(t.seed, kShadowSbsSbs, x, s);
    Rand fd = link_rng(t.seed, kFadeSbsSbs, x, s);
    const double shadow = sh.lognormal(p.shadow_mu, p.shadow_sigma);
    const double fade = fd.gamma(p.k_sbs, p.theta_sbs());
    return shadow * fade;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::None: return "none";
        case Scheme::InterferenceRejection: return "interference-rejection";
        case Scheme::BiaServingOnly: return "bia-serving-only";
        case Scheme::BiaAllCns: return "bia-all-cns";
        case Scheme::DistributedModeSelection: return "distributed-mode-selection";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::None, Scheme::InterferenceRejection, Scheme::BiaServingOnly,
                     Scheme::BiaAllCns, Scheme::DistributedModeSelection})
        if (name == scheme_name(s)) return s;
    throw std::domain_error("unknown mitigation scheme: " + name);
}

void MitigationConfig::validate() const {
    if (scheme == Scheme::DistributedModeSelection && !(tau > 0.0))
        throw std::domain_error("distributed mode selection requires tau > 0");
}

double default_region_radius(const NetworkParams& p) {
    return std::max(5.0 / std::sqrt(kPi * p.lambda_c_raw),
                    5.0 / std::sqrt(kPi * p.lambda_s_raw));
}

Topology sample_topology(const NetworkParams& p, double region_radius, std::uint64_t seed) {
    p.validate();
    if (!(region_radius > 0.0)) throw std::domain_error("region_radius must be > 0");
    Topology t;
    t.region_radius = region_radius;
    t.seed = seed;
    const double area = kPi * region_radius * region_radius;

    {
        Rand rng = stream_rng(seed, kCnPositions);
        sample_disk(rng, region_radius, t.cn_pos, rng.poisson(p.lambda_c_raw * area));
    }
    {
        Rand rng = stream_rng(seed, kSbsPositions);
        sample_disk(rng, region_radius, t.sbs_pos, rng.poisson(p.lambda_s_raw * area));
    }
    if (t.sbs_pos.empty() || t.cn_pos.empty()) throw DegenerateTopology{};

    const int ns = t.n_sbs();
    const int nc = t.n_cn();

    {
        Rand rng = stream_rng(seed, kShadowSbsUser);
        t.shadow_sbs_user.resize(ns);
        for (int i = 0; i < ns; ++i)
            t.shadow_sbs_user[i] = rng.lognormal(p.shadow_mu, p.shadow_sigma);
    }
    {
        Rand rng = stream_rng(seed, kFadeSbsUser);
        t.fade_sbs_user.resize(ns);
        for (int i = 0; i < ns; ++i) t.fade_sbs_user[i] = rng.gamma(p.k_user, p.theta_user());
    }
    {
        Rand rng = stream_rng(seed, kShadowCnUser);
        t.shadow_cn_user.resize(nc);
        for (int j = 0; j < nc; ++j)
            t.shadow_cn_user[j] = rng.lognormal(p.shadow_mu, p.shadow_sigma);
    }
    {
        Rand rng = stream_rng(seed, kShadowCnSbs);
        t.shadow_cn_sbs.resize(static_cast<std::size_t>(nc) * ns);
        for (int j = 0; j < nc; ++j)
            for (int i = 0; i < ns; ++i)
                t.shadow_cn_sbs[static_cast<std::size_t>(j) * ns + i] =
                    rng.lognormal(p.shadow_mu, p.shadow_sigma);
    }
    {
        Rand rng = stream_rng(seed, kModes);
        t.mode_ibfd.resize(ns);
        for (int i = 0; i < ns; ++i) t.mode_ibfd[i] = rng.uniform() < p.q ? 1 : 0;
    }
    t.serving_cn.assign(ns, -1);
    t.cn_load.assign(nc, 0);
    t.served.assign(ns, 0);
    return t;
}

void associate(Topology& t, const NetworkParams& p) {
    const int ns = t.n_sbs();
    const int nc = t.n_cn();
    if (ns == 0 || nc == 0) throw DegenerateTopology{};

    // typical user: strongest average received power among small cells
    {
        double best = -1.0;
        for (int i = 0; i < ns; ++i) {
            const double r = std::max(norm(t.sbs_pos[i]), 1e-12);
            const double score = t.shadow_sbs_user[i] * std::pow(r, -p.beta);
            if (score > best) {
                best = score;
                t.serving_sbs = i;
            }
        }
    }

    // each small cell: strongest hub
    std::fill(t.cn_load.begin(), t.cn_load.end(), 0);
    std::vector<std::vector<int>> members(nc);
    for (int i = 0; i < ns; ++i) {
        double best = -1.0;
        int who = -1;
        for (int j = 0; j < nc; ++j) {
            const double r = std::max(dist(t.cn_pos[j], t.sbs_pos[i]), 1e-12);
            const double score =
                t.shadow_cn_sbs[static_cast<std::size_t>(j) * ns + i] * std::pow(r, -p.beta);
            if (score > best) {
                best = score;
                who = j;
            }
        }
        t.serving_cn[i] = who;
        t.cn_load[who] += 1;
        members[who].push_back(i);
    }

    // each hub grants backhaul streams to a uniform subset of its cells
    std::fill(t.served.begin(), t.served.end(), 0);
    for (int j = 0; j < nc; ++j) {
        auto& list = members[j];
        const int grant = std::min<int>(p.s_max, static_cast<int>(list.size()));
        if (grant == static_cast<int>(list.size())) {
            for (int i : list) t.served[i] = 1;
            continue;
        }
        Rand rng = link_rng(t.seed, kServedSubset, static_cast<std::uint64_t>(j), 0);
        for (int k = 0; k < grant; ++k) {  // partial Fisher-Yates
            const int pick = k + static_cast<int>(rng.uniform() * (list.size() - k));
            std::swap(list[k], list[std::min<int>(pick, static_cast<int>(list.size()) - 1)]);
            t.served[list[k]] = 1;
        }
    }
}

namespace {

// Distributed rule for one cell: in-band when the path-loss power from the
// cell at its user beats the user's nearest hub by the threshold.
bool rule_picks_inband(double r_own, double r_nearest_cn, const NetworkParams& p, double tau) {
    return p.p_s * std::pow(r_own, -p.beta) >=
           tau * p.p_c * std::pow(r_nearest_cn, -p.beta);
}

std::vector<std::uint8_t> distributed_modes(const Topology& t, const NetworkParams& p,
                                            double tau, double lambda_s_eff) {
    const int ns = t.n_sbs();
    const int nc = t.n_cn();
    std::vector<std::uint8_t> modes(ns, 0);
    for (int i = 0; i < ns; ++i) {
        if (i == t.serving_sbs) continue;  // the typical cell is handled exactly
        Rand rng = link_rng(t.seed, kOwnUser, static_cast<std::uint64_t>(i), 0);
        // marginal law of a cell's own user: nearest-cell distance, uniform angle
        const double r_own = std::sqrt(-std::log(rng.uniform()) / (kPi * lambda_s_eff));
        const double ang = 2.0 * kPi * rng.uniform();
        const Vec2 user{t.sbs_pos[i].x + r_own * std::cos(ang),
                        t.sbs_pos[i].y + r_own * std::sin(ang)};
        double r_cn = 1e300;
        for (int j = 0; j < nc; ++j) r_cn = std::min(r_cn, dist(t.cn_pos[j], user));
        modes[i] = rule_picks_inband(r_own, r_cn, p, tau) ? 1 : 0;
    }
    // typical cell: its user is the origin
    const double r_su = norm(t.sbs_pos[t.serving_sbs]);
    double r_cn = 1e300;
    for (int j = 0; j < nc; ++j) r_cn = std::min(r_cn, norm(t.cn_pos[j]));
    modes[t.serving_sbs] = rule_picks_inband(r_su, r_cn, p, tau) ? 1 : 0;
    return modes;
}

}  // namespace

DropResult evaluate_drop(const Topology& t, const NetworkParams& p, const MitigationConfig& m) {
    m.validate();
    const int ns = t.n_sbs();
    const int nc = t.n_cn();
    const int s0 = t.serving_sbs;
    if (s0 < 0) throw std::logic_error("evaluate_drop needs an associated topology");
    const int c0 = t.serving_cn[s0];

    const DerivedModel d = derive_model(p);

    const std::vector<std::uint8_t>* modes = &t.mode_ibfd;
    std::vector<std::uint8_t> rule_modes;
    if (m.scheme == Scheme::DistributedModeSelection) {
        rule_modes = distributed_modes(t, p, m.tau, d.lambda_s);
        modes = &rule_modes;
    }

    // optional thinning: an interferer must itself be backhauled above
    // threshold in this slot, not merely hold a stream grant
    std::vector<std::uint8_t> active(t.served.begin(), t.served.end());
    if (m.gated_interferers) {
        for (int s = 0; s < ns; ++s) {
            if (!t.served[s] || s == t.serving_sbs) continue;
            const int cs = t.serving_cn[s];
            double agg = (*modes)[s] ? d.i_si : 0.0;
            for (int x = 0; x < ns; ++x) {
                if (x == s || !t.served[x] || !(*modes)[x]) continue;
                const double r = std::max(dist(t.sbs_pos[x], t.sbs_pos[s]), 1e-12);
                agg += p.p_s * sbs_pair_gain(t, p, x, s) * std::pow(r, -p.beta);
            }
            for (int y = 0; y < nc; ++y) {
                if (y == cs) continue;
                const double r = std::max(dist(t.cn_pos[y], t.sbs_pos[s]), 1e-12);
                agg += p.p_c * t.shadow_cn_sbs[static_cast<std::size_t>(y) * ns + s] *
                       std::pow(r, -p.beta);
            }
            const double r_cs = std::max(dist(t.cn_pos[cs], t.sbs_pos[s]), 1e-12);
            const double sir = p.p_c *
                               t.shadow_cn_sbs[static_cast<std::size_t>(cs) * ns + s] *
                               std::pow(r_cs, -p.beta) / std::max(agg, 1e-300);
            const double thr =
                backhaul_threshold(t.cn_load[cs], p, (*modes)[s] ? Mode::IBFD : Mode::OBFD);
            active[s] = sir > thr ? 1 : 0;
        }
    }

    DropResult out;
    out.r_su = std::max(norm(t.sbs_pos[s0]), 1e-12);
    out.r_cs = std::max(dist(t.cn_pos[c0], t.sbs_pos[s0]), 1e-12);
    out.load_ns = t.cn_load[c0];
    out.alpha = backhaul_access_prob(out.load_ns, p.s_max);
    out.mode_is_ibfd = (*modes)[s0] != 0;

    // ---- access link ----
    const double signal = p.p_s * t.fade_sbs_user[s0] * t.shadow_sbs_user[s0] *
                          std::pow(out.r_su, -p.beta);
    double i_sbs_inband = 0.0;
    double i_sbs_outband = 0.0;
    for (int x = 0; x < ns; ++x) {
        if (x == s0 || !active[x]) continue;
        const double r = std::max(norm(t.sbs_pos[x]), 1e-12);
        const double contrib =
            p.p_s * t.fade_sbs_user[x] * t.shadow_sbs_user[x] * std::pow(r, -p.beta);
        if ((*modes)[x])
            i_sbs_inband += contrib;
        else
            i_sbs_outband += contrib;
    }

    // hub power profile: per-stream control rescales a hub's radiated power
    const bool bia_serving = m.scheme == Scheme::BiaServingOnly;
    const bool bia_all = m.scheme == Scheme::BiaAllCns;
    std::vector<double> cn_power(nc, p.p_c);
    if (bia_serving || bia_all) {
        // gather members once
        std::vector<std::vector<int>> members(nc);
        for (int i = 0; i < ns; ++i)
            if (t.served[i]) members[t.serving_cn[i]].push_back(i);
        for (int j = 0; j < nc; ++j) {
            if (!bia_all && j != c0) continue;
            if (members[j].empty()) continue;
            const int mj = static_cast<int>(members[j].size());
            const double gamma_bj = backhaul_threshold(t.cn_load[j], p, Mode::IBFD);
            double total_equiv = 0.0;
            for (int s : members[j]) {
                if (!(*modes)[s]) {
                    total_equiv += p.p_c;  // out-of-band streams stay at full power
                    continue;
                }
                // aggregate interference at cell s under full-power operation
                double agg = d.i_si;
                for (int x = 0; x < ns; ++x) {
                    if (x == s || !t.served[x] || !(*modes)[x]) continue;
                    const double r = std::max(dist(t.sbs_pos[x], t.sbs_pos[s]), 1e-12);
                    agg += p.p_s * sbs_pair_gain(t, p, x, s) * std::pow(r, -p.beta);
                }
                for (int y = 0; y < nc; ++y) {
                    if (y == t.serving_cn[s]) continue;
                    const double r = std::max(dist(t.cn_pos[y], t.sbs_pos[s]), 1e-12);
                    agg += p.p_c * t.shadow_cn_sbs[static_cast<std::size_t>(y) * ns + s] *
                           std::pow(r, -p.beta);
                }
                const double r_cs = std::max(dist(t.cn_pos[j], t.sbs_pos[s]), 1e-12);
                const double gain = t.shadow_cn_sbs[static_cast<std::size_t>(j) * ns + s] *
                                    std::pow(r_cs, -p.beta);
                total_equiv += std::min(p.p_c, gamma_bj * agg / gain);
            }
            cn_power[j] = total_equiv / mj;
        }
    }

    double i_cn_full = 0.0;
    double i_cn_serving = 0.0;
    for (int y = 0; y < nc; ++y) {
        const double r = std::max(norm(t.cn_pos[y]), 1e-12);
        const double contrib = cn_power[y] * t.shadow_cn_user[y] * std::pow(r, -p.beta);
        i_cn_full += contrib;
        if (y == c0) i_cn_serving = contrib;
    }
    if (m.scheme == Scheme::InterferenceRejection) i_cn_full -= i_cn_serving;

    const double den_inband = i_sbs_inband + i_cn_full + p.n0;
    const double den_outband = i_sbs_outband + p.n0;
    out.access_sinr_ibfd = den_inband > 0.0 ? signal / den_inband : 1e300;
    out.access_sinr_obfd = den_outband > 0.0 ? signal / den_outband : 1e300;

    // ---- backhaul link ----
    double i_ss = 0.0;
    for (int x = 0; x < ns; ++x) {
        if (x == s0 || !active[x] || !(*modes)[x]) continue;
        const double r = std::max(dist(t.sbs_pos[x], t.sbs_pos[s0]), 1e-12);
        i_ss += p.p_s * sbs_pair_gain(t, p, x, s0) * std::pow(r, -p.beta);
    }
    double i_cs = 0.0;
    for (int y = 0; y < nc; ++y) {
        if (y == c0) continue;
        const double r = std::max(dist(t.cn_pos[y], t.sbs_pos[s0]), 1e-12);
        i_cs += cn_power[y] * t.shadow_cn_sbs[static_cast<std::size_t>(y) * ns + s0] *
                std::pow(r, -p.beta);
    }
    if (m.pilot_contamination) {
        for (int y = 0; y < nc; ++y) {
            if (y == c0 || t.cn_load[y] == 0) continue;
            const int my = std::min(t.cn_load[y], p.s_max);
            Rand rng = link_rng(t.seed, kPilotReuse, static_cast<std::uint64_t>(y), 0);
            const bool reuses =
                t.cn_load[y] >= p.s_max ||
                rng.uniform() < static_cast<double>(t.cn_load[y]) / p.s_max;
            if (!reuses) continue;
            const double r = std::max(dist(t.cn_pos[y], t.sbs_pos[s0]), 1e-12);
            i_cs += (static_cast<double>(p.m_antennas - my + 1) / my) * p.p_c *
                    t.shadow_cn_sbs[static_cast<std::size_t>(y) * ns + s0] *
                    std::pow(r, -p.beta);
        }
    }

    const double bh_gain =
        t.shadow_cn_sbs[static_cast<std::size_t>(c0) * ns + s0] * std::pow(out.r_cs, -p.beta);
    const double own_power =
        (bia_serving || bia_all) && out.mode_is_ibfd
            ? std::min(p.p_c, backhaul_threshold(out.load_ns, p, Mode::IBFD) *
                                  (i_ss + i_cs + d.i_si) / bh_gain)
            : p.p_c;
    const double bh_signal_inband = own_power * bh_gain;
    const double bh_signal_outband = p.p_c * bh_gain;

    const double den_bh_inband = i_ss + i_cs + d.i_si;
    const double den_bh_outband = i_ss + i_cs;
    out.backhaul_sir_ibfd = den_bh_inband > 0.0 ? bh_signal_inband / den_bh_inband : 1e300;
    out.backhaul_sir_obfd = den_bh_outband > 0.0 ? bh_signal_outband / den_bh_outband : 1e300;

    out.gamma_b_ibfd = backhaul_threshold(out.load_ns, p, Mode::IBFD);
    out.gamma_b_obfd = backhaul_threshold(out.load_ns, p, Mode::OBFD);
    out.access_ok_ibfd = out.access_sinr_ibfd > d.gamma_a_ibfd;
    out.access_ok_obfd = out.access_sinr_obfd > d.gamma_a_obfd;
    // power control designs exactly to the threshold; meeting it counts
    out.backhaul_ok_ibfd = out.backhaul_sir_ibfd >= out.gamma_b_ibfd * (1.0 - 1e-12);
    out.backhaul_ok_obfd = out.backhaul_sir_obfd >= out.gamma_b_obfd * (1.0 - 1e-12);
    return out;
}

namespace {

struct Counts {
    long drops = 0;
    long resampled = 0;
    long access_i = 0, access_o = 0, backhaul_i = 0, backhaul_o = 0;
    long mode_i = 0;
    long access_i_cond = 0, backhaul_i_cond = 0;  // conditioned on the rule's choice
    long access_o_cond = 0, backhaul_o_cond = 0;

    void add(const DropResult& r) {
        ++drops;
        access_i += r.access_ok_ibfd;
        access_o += r.access_ok_obfd;
        backhaul_i += r.backhaul_ok_ibfd;
        backhaul_o += r.backhaul_ok_obfd;
        if (r.mode_is_ibfd) {
            ++mode_i;
            access_i_cond += r.access_ok_ibfd;
            backhaul_i_cond += r.backhaul_ok_ibfd;
        } else {
            access_o_cond += r.access_ok_obfd;
            backhaul_o_cond += r.backhaul_ok_obfd;
        }
    }
    void merge(const Counts& o) {
        drops += o.drops;
        resampled += o.resampled;
        access_i += o.access_i;
        access_o += o.access_o;
        backhaul_i += o.backhaul_i;
        backhaul_o += o.backhaul_o;
        mode_i += o.mode_i;
        access_i_cond += o.access_i_cond;
        backhaul_i_cond += o.backhaul_i_cond;
        access_o_cond += o.access_o_cond;
        backhaul_o_cond += o.backhaul_o_cond;
    }
};

DropResult run_one(const NetworkParams& p, const MitigationConfig& m, double radius,
                   std::uint64_t seed, long index, long& resampled) {
    for (int attempt = 0;; ++attempt) {
        const std::uint64_t sub =
            mix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1)) +
            static_cast<std::uint64_t>(attempt);
        try {
            Topology t = sample_topology(p, radius, sub);
            associate(t, p);
            return evaluate_drop(t, p, m);
        } catch (const DegenerateTopology&) {
            ++resampled;
            if (attempt > 1000)
                throw std::runtime_error("region persistently empty; enlarge it");
        }
    }
}

double half_width(double p_hat, long n) {
    if (n <= 0) return 0.0;
    return 1.96 * std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / n);
}

}  // namespace

CoverageReport estimate_coverage(const NetworkParams& p, const MitigationConfig& m, long drops,
                                 std::uint64_t seed, const EstimateOptions& opt) {
    p.validate();
    m.validate();
    if (drops < 1) throw std::domain_error("drops must be >= 1");
    const double radius = opt.region_radius > 0.0 ? opt.region_radius : default_region_radius(p);

    Counts total;
    if (opt.on_drop) {
        for (long i = 0; i < drops; ++i) {
            DropResult r = run_one(p, m, radius, seed, i, total.resampled);
            total.add(r);
            opt.on_drop(i, r);
        }
    } else {
        int threads = opt.threads > 0 ? opt.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
        threads = std::max(1, std::min<int>(threads, 64));
        std::vector<Counts> parts(threads);
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const long chunk = (drops + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const long lo = w * chunk;
            const long hi = std::min(drops, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, w, lo, hi]() {
                try {
                    for (long i = lo; i < hi; ++i)
                        parts[w].add(run_one(p, m, radius, seed, i, parts[w].resampled));
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
        for (const auto& c : parts) total.merge(c);
    }

    const bool distributed = m.scheme == Scheme::DistributedModeSelection;
    const long n = total.drops;
    CoverageReport rep;
    rep.method = Method::MonteCarlo;
    rep.drops = n;
    rep.resampled = total.resampled;

    long n_i = n, n_o = n;
    long ai = total.access_i, ao = total.access_o;
    long bi = total.backhaul_i, bo = total.backhaul_o;
    double q_mix = p.q;
    if (distributed) {
        n_i = total.mode_i;
        n_o = n - total.mode_i;
        ai = total.access_i_cond;
        bi = total.backhaul_i_cond;
        ao = total.access_o_cond;
        bo = total.backhaul_o_cond;
        q_mix = static_cast<double>(total.mode_i) / n;
        rep.realized_ibfd_fraction = q_mix;
    }
    rep.c_access_ibfd = n_i > 0 ? static_cast<double>(ai) / n_i : 0.0;
    rep.c_access_obfd = n_o > 0 ? static_cast<double>(ao) / n_o : 0.0;
    rep.c_backhaul_ibfd = n_i > 0 ? static_cast<double>(bi) / n_i : 0.0;
    rep.c_backhaul_obfd = n_o > 0 ? static_cast<double>(bo) / n_o : 0.0;
    rep.c_ibfd = rep.c_access_ibfd * rep.c_backhaul_ibfd;
    rep.c_obfd = rep.c_access_obfd * rep.c_backhaul_obfd;
    rep.c_user = q_mix * rep.c_ibfd + (1.0 - q_mix) * rep.c_obfd;

    const double ha_i = half_width(rep.c_access_ibfd, n_i);
    const double hb_i = half_width(rep.c_backhaul_ibfd, n_i);
    const double ha_o = half_width(rep.c_access_obfd, n_o);
    const double hb_o = half_width(rep.c_backhaul_obfd, n_o);
    rep.ci_half_ibfd = std::sqrt(ha_i * ha_i * rep.c_backhaul_ibfd * rep.c_backhaul_ibfd +
                                 hb_i * hb_i * rep.c_access_ibfd * rep.c_access_ibfd);
    rep.ci_half_obfd = std::sqrt(ha_o * ha_o * rep.c_backhaul_obfd * rep.c_backhaul_obfd +
                                 hb_o * hb_o * rep.c_access_obfd * rep.c_access_obfd);
    rep.ci_half_user = std::sqrt(q_mix * q_mix * rep.ci_half_ibfd * rep.ci_half_ibfd +
                                 (1.0 - q_mix) * (1.0 - q_mix) * rep.ci_half_obfd * rep.ci_half_obfd);
    rep.error = std::max({rep.ci_half_ibfd, rep.ci_half_obfd, rep.ci_half_user});
    return rep;
}

double empirical_ibfd_fraction(const NetworkParams& p, double tau, long drops,
                               std::uint64_t seed, double region_radius) {
    p.validate();
    if (!(tau > 0.0)) throw std::domain_error("tau must be > 0");
    const double radius = region_radius > 0.0 ? region_radius : default_region_radius(p);
    const double area = kPi * radius * radius;
    long inband = 0;
    long counted = 0;
    std::vector<Vec2> cns, sbss;
    for (long i = 0; i < drops; ++i) {
        const std::uint64_t sub =
            mix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1));
        Rand rc = stream_rng(sub, kCnPositions);
        sample_disk(rc, radius, cns, rc.poisson(p.lambda_c_raw * area));
        Rand rs = stream_rng(sub, kSbsPositions);
        sample_disk(rs, radius, sbss, rs.poisson(p.lambda_s_raw * area));
        if (cns.empty() || sbss.empty()) continue;
        Rand sh = stream_rng(sub, kShadowSbsUser);
        double best = -1.0;
        double r_su = 0.0;
        for (const Vec2& s : sbss) {
            const double r = std::max(norm(s), 1e-12);
            // constant shadowing cannot change the argmax
            const double shadow =
                p.shadow_sigma == 0.0 ? 1.0 : sh.lognormal(p.shadow_mu, p.shadow_sigma);
            const double score = shadow * std::pow(r, -p.beta);
            if (score > best) {
                best = score;
                r_su = r;
            }
        }
        double r_cn = 1e300;
        for (const Vec2& c : cns) r_cn = std::min(r_cn, norm(c));
        ++counted;
        if (rule_picks_inband(r_su, r_cn, p, tau)) ++inband;
    }
    if (counted == 0) throw std::runtime_error("all drops degenerate");
    return static_cast<double>(inband) / counted;
}

void write_drop_record(std::ostream& os, long index, const DropResult& r) {
    os << "{\"drop\":" << index << ",\"mode_is_ibfd\":" << (r.mode_is_ibfd ? "true" : "false")
       << ",\"access_sinr_ibfd\":" << r.access_sinr_ibfd
       << ",\"access_sinr_obfd\":" << r.access_sinr_obfd
       << ",\"backhaul_sir_ibfd\":" << r.backhaul_sir_ibfd
       << ",\"backhaul_sir_obfd\":" << r.backhaul_sir_obfd << ",\"r_su\":" << r.r_su
       << ",\"r_cs\":" << r.r_cs << ",\"load_ns\":" << r.load_ns << ",\"alpha\":" << r.alpha
       << ",\"gamma_b_ibfd\":" << r.gamma_b_ibfd << ",\"gamma_b_obfd\":" << r.gamma_b_obfd
       << ",\"access_ok_ibfd\":" << (r.access_ok_ibfd ? "true" : "false")
       << ",\"access_ok_obfd\":" << (r.access_ok_obfd ? "true" : "false")
       << ",\"backhaul_ok_ibfd\":" << (r.backhaul_ok_ibfd ? "true" : "false")
       << ",\"backhaul_ok_obfd\":" << (r.backhaul_ok_obfd ? "true" : "false") << "}\n";
}

}  // namespace fdcov::mc
