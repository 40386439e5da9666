#include "fdcov/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <atomic>
#include <functional>
#include <mutex>
#include <iostream>
#include <string>
#include <thread>

#include "fdcov/specfun.hpp"

namespace fdcov {

const char* method_name(Method m) {
    switch (m) {
        case Method::AnalyticExact: return "analytic-exact";
        case Method::AnalyticRayleigh: return "analytic-rayleigh";
        case Method::AnalyticApprox: return "analytic-approx";
        case Method::MonteCarlo: return "montecarlo";
    }
    return "?";
}

}  // namespace fdcov

namespace fdcov::analytic {

namespace {

constexpr double kPi = 3.14159265358979323846;
/// Serving-distance integrals truncated where the Rayleigh weight's tail
/// mass drops below 1e-8.
constexpr double kWeightTailCut = 18.420680743952367;

using C = std::complex<double>;

double delta_of(const NetworkParams& p) { return 2.0 / p.beta; }

double lambda_bar(Mode mode, const DerivedModel& d) {
    return mode == Mode::IBFD ? d.lambda_bar_si : d.lambda_bar_so;
}

double gamma_access(Mode mode, const DerivedModel& d) {
    return mode == Mode::IBFD ? d.gamma_a_ibfd : d.gamma_a_obfd;
}

// 2F1[k, -d; 1-d; -x] - 1, the radial growth factor of the co-tier exponent.
template <class S>
S cotier_growth(double k, double delta, S x) {
    return gauss_2f1(k, -delta, 1.0 - delta, -x) - S(1.0);
}

// g(y) with -log L = pi lambda_c r^2 g(y), y = t P_c / r^beta:
// g(y) = (Gamma(1-d) + d Gu(-d, y)) y^d - 1, series form below |y| = 16.
template <class S>
S cn_exclusion_exponent(double delta, S y) {
    if (std::abs(y) == 0.0) return S(0.0);
    if (std::abs(y) < 16.0) {
        // entire series: g(y) = d sum_{n>=1} (-1)^{n+1} y^n / (n! (n - d))
        S term = y;
        S sum = term / (1.0 - delta);
        for (int n = 2; n < 300; ++n) {
            term *= -y / static_cast<double>(n);
            const S add = term / (n - delta);
            sum += add;
            if (std::abs(add) < 1e-16 * std::abs(sum) && n > 4) break;
        }
        return S(delta) * sum;
    }
    const S gu = upper_inc_gamma(-delta, y);
    return (std::tgamma(1.0 - delta) + S(delta) * gu) * std::pow(y, delta) - S(1.0);
}

}  // namespace

double sbs_sbs_exponent_coefficient(double k, double beta) {
    const double delta = 2.0 / beta;
    return -delta * beta_fn(k + delta, -delta);
}

double sbs_sbs_exponent_coefficient_rayleigh(double beta) {
    const double a = 2.0 * kPi / beta;
    return a / std::sin(a);
}

double laplace_sbs_user(double t, double r_su, const DerivedModel& d, const NetworkParams& p,
                        Mode mode) {
    if (t < 0.0) throw std::domain_error("laplace transform requires t >= 0");
    if (!(r_su > 0.0)) throw std::domain_error("r_su must be > 0");
    const double lb = lambda_bar(mode, d);
    if (t == 0.0 || lb == 0.0) return 1.0;
    const double x = t * p.p_s * p.theta_user() / std::pow(r_su, p.beta);
    const double growth = cotier_growth(p.k_user, delta_of(p), x);
    return std::exp(-kPi * lb * r_su * r_su * growth);
}

std::complex<double> laplace_sbs_user_jw(double w, double r_su, const DerivedModel& d,
                                         const NetworkParams& p, Mode mode) {
    const double lb = lambda_bar(mode, d);
    if (w == 0.0 || lb == 0.0) return C(1.0, 0.0);
    const C x(0.0, -w * p.p_s * p.theta_user() / std::pow(r_su, p.beta));
    const C growth = cotier_growth(p.k_user, delta_of(p), x);
    return std::exp(-kPi * lb * r_su * r_su * growth);
}

double laplace_cn_user(double t, const DerivedModel& d, const NetworkParams& p) {
    if (t < 0.0) throw std::domain_error("laplace transform requires t >= 0");
    if (t == 0.0) return 1.0;
    const double delta = delta_of(p);
    return std::exp(-kPi * d.lambda_c * std::pow(t * p.p_c, delta) *
                    std::tgamma(1.0 - delta));
}

std::complex<double> laplace_cn_user_jw(double w, const DerivedModel& d,
                                        const NetworkParams& p) {
    if (w == 0.0) return C(1.0, 0.0);
    const double delta = delta_of(p);
    // (-jw P_c)^d = (w P_c)^d e^{-j pi d / 2}
    const double mag = std::pow(w * p.p_c, delta);
    const C phase = std::polar(1.0, -0.5 * kPi * delta);
    return std::exp(-kPi * d.lambda_c * std::tgamma(1.0 - delta) * mag * phase);
}

double laplace_sbs_sbs(double t, const DerivedModel& d, const NetworkParams& p) {
    if (t < 0.0) throw std::domain_error("laplace transform requires t >= 0");
    if (t == 0.0 || d.lambda_bar_si == 0.0) return 1.0;
    const double delta = delta_of(p);
    const double coef = (p.k_sbs == 1.0) ? sbs_sbs_exponent_coefficient_rayleigh(p.beta)
                                         : sbs_sbs_exponent_coefficient(p.k_sbs, p.beta);
    return std::exp(-kPi * d.lambda_bar_si * coef *
                    std::pow(t * p.p_s * p.theta_sbs(), delta));
}

std::complex<double> laplace_sbs_sbs_jw(double w, const DerivedModel& d,
                                        const NetworkParams& p) {
    if (w == 0.0 || d.lambda_bar_si == 0.0) return C(1.0, 0.0);
    const double delta = delta_of(p);
    const double coef = (p.k_sbs == 1.0) ? sbs_sbs_exponent_coefficient_rayleigh(p.beta)
                                         : sbs_sbs_exponent_coefficient(p.k_sbs, p.beta);
    const double mag = std::pow(w * p.p_s * p.theta_sbs(), delta);
    const C phase = std::polar(1.0, -0.5 * kPi * delta);
    return std::exp(-kPi * d.lambda_bar_si * coef * mag * phase);
}

double laplace_cn_sbs(double t, double r_cs, const DerivedModel& d, const NetworkParams& p) {
    if (t < 0.0) throw std::domain_error("laplace transform requires t >= 0");
    if (!(r_cs > 0.0)) throw std::domain_error("r_cs must be > 0");
    if (t == 0.0) return 1.0;
    const double y = t * p.p_c / std::pow(r_cs, p.beta);
    const double g = cn_exclusion_exponent(delta_of(p), y);
    return std::exp(-kPi * d.lambda_c * r_cs * r_cs * g);
}

std::complex<double> laplace_cn_sbs_jw(double w, double r_cs, const DerivedModel& d,
                                       const NetworkParams& p) {
    if (w == 0.0) return C(1.0, 0.0);
    const C y(0.0, -w * p.p_c / std::pow(r_cs, p.beta));
    const C g = cn_exclusion_exponent(delta_of(p), y);
    return std::exp(-kPi * d.lambda_c * r_cs * r_cs * g);
}

namespace {

// Inner inversion for the access link at serving distance r: the Gamma
// fading on the desired link enters through its transform, noise through a
// rotation, so the CDF is evaluated at 0.
double access_cdf(double r, Mode mode, const DerivedModel& d, const NetworkParams& p,
                  const QuadratureSettings& qs) {
    const double gamma_a = gamma_access(mode, d);
    const double v_scale = p.p_s * p.theta_user() / (gamma_a * std::pow(r, p.beta));
    CharacteristicFunction cf;
    cf.nonnegative = false;
    cf.eval = [r, mode, &d, &p, v_scale](double w) {
        C val = laplace_sbs_user_jw(w, r, d, p, mode);
        if (mode == Mode::IBFD) val *= laplace_cn_user_jw(w, d, p);
        val *= std::pow(C(1.0, w * v_scale), -p.k_user);
        if (p.n0 > 0.0) val *= std::polar(1.0, w * p.n0);
        return val;
    };
    QuadratureSettings inner = qs;
    inner.oscillation_scale = v_scale + p.n0;
    return gil_pelaez_cdf(cf, 0.0, inner);
}

double serving_average(const std::function<double(double)>& f, double lambda,
                       const QuadratureSettings& qs, double& err) {
    // E over the nearest-point distance: u = pi lambda r^2 gives weight e^{-u}
    SubdivisionBudget budget{qs.max_subdivisions};
    const auto integrand = [&](double u) {
        const double r = std::sqrt(u / (kPi * lambda));
        return std::exp(-u) * f(r);
    };
    return integrate_adaptive(integrand, 0.0, kWeightTailCut, std::max(qs.rel_tol, 1e-6),
                              std::max(qs.abs_tol, 1e-8), budget, err);
}

}  // namespace

double access_coverage(Mode mode, const DerivedModel& d, const NetworkParams& p,
                       const QuadratureSettings& qs) {
    double err = 0.0;
    return serving_average([&](double r) { return access_cdf(r, mode, d, p, qs); },
                           d.lambda_s, qs, err);
}

double backhaul_coverage(Mode mode, const DerivedModel& d, const NetworkParams& p,
                         const LoadDistribution& load, const QuadratureSettings& qs) {
    // expectation over the load, conditioned on the serving hub having at
    // least the observed small cell attached
    double mass = 0.0;
    for (int n = 1; n <= load.n_max; ++n) mass += load.pmf[n];
    if (mass <= 0.0) throw std::domain_error("load distribution has no mass on n >= 1");

    const double i_si = (mode == Mode::IBFD) ? d.i_si : 0.0;
    const auto coverage_at_load = [&](int n) {
        const double gamma_b = backhaul_threshold(n, p, mode);
        double err = 0.0;
        return serving_average(
            [&](double r) {
                const double v = p.p_c / (gamma_b * std::pow(r, p.beta)) - i_si;
                CharacteristicFunction cf;
                cf.nonnegative = true;
                cf.eval = [r, &d, &p](double w) {
                    return laplace_sbs_sbs_jw(w, d, p) * laplace_cn_sbs_jw(w, r, d, p);
                };
                cf.real_laplace = [r, &d, &p](double t) {
                    return laplace_sbs_sbs(t, d, p) * laplace_cn_sbs(t, r, d, p);
                };
                return gil_pelaez_cdf(cf, v, qs);
            },
            d.lambda_c, qs, err);
    };

    std::vector<int> loads;
    for (int n = 1; n <= load.n_max; ++n)
        if (load.pmf[n] / mass >= 1e-9) loads.push_back(n);

    // load points are independent; results are merged in load order
    std::vector<double> cov(loads.size(), 0.0);
    const int workers =
        std::max(1, std::min<int>({4, static_cast<int>(std::thread::hardware_concurrency()),
                                   static_cast<int>(loads.size())}));
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&]() {
        try {
            for (;;) {
                const std::size_t k = cursor.fetch_add(1);
                if (k >= loads.size()) return;
                cov[k] = coverage_at_load(loads[k]);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    double acc = 0.0;
    for (std::size_t k = 0; k < loads.size(); ++k)
        acc += (load.pmf[loads[k]] / mass) * cov[k];
    return std::min(1.0, std::max(0.0, acc));
}

CoverageReport rate_coverage(const DerivedModel& d, const NetworkParams& p,
                             const LoadDistribution& load, const QuadratureSettings& qs) {
    CoverageReport r;
    r.method = Method::AnalyticExact;
    r.c_access_ibfd = access_coverage(Mode::IBFD, d, p, qs);
    r.c_access_obfd = access_coverage(Mode::OBFD, d, p, qs);
    r.c_backhaul_ibfd = backhaul_coverage(Mode::IBFD, d, p, load, qs);
    r.c_backhaul_obfd = backhaul_coverage(Mode::OBFD, d, p, load, qs);
    r.c_ibfd = r.c_access_ibfd * r.c_backhaul_ibfd;
    r.c_obfd = r.c_access_obfd * r.c_backhaul_obfd;
    r.c_user = p.q * r.c_ibfd + (1.0 - p.q) * r.c_obfd;
    r.error = 5e-5;  // conservative bound from the nested tolerances
    return r;
}

namespace {

double interference_offset(const DerivedModel& d, const NetworkParams& p) {
    // A = Gamma(1 - 2/beta) lambda_c (gamma_I P_c / (P_s theta))^{2/beta}
    const double delta = delta_of(p);
    return std::tgamma(1.0 - delta) * d.lambda_c *
           std::pow(d.gamma_a_ibfd * p.p_c / (p.p_s * p.theta_user()), delta);
}

void require_rayleigh_interference_limited(const NetworkParams& p, const char* who) {
    if (p.k_user != 1.0)
        throw std::domain_error(std::string(who) + " requires Rayleigh access fading (k_user = 1)");
    if (p.n0 != 0.0)
        throw std::domain_error(std::string(who) + " requires the interference-limited regime (n0 = 0)");
}

}  // namespace

double access_coverage_rayleigh(const DerivedModel& d, const NetworkParams& p, Mode mode) {
    require_rayleigh_interference_limited(p, "access_coverage_rayleigh");
    const double delta = delta_of(p);
    const double gamma_a = gamma_access(mode, d);
    const double growth = cotier_growth(1.0, delta, gamma_a);
    const double offset = (mode == Mode::IBFD) ? interference_offset(d, p) : 0.0;
    return d.lambda_s / (lambda_bar(mode, d) * growth + d.lambda_s + offset);
}

double access_coverage_approx(const DerivedModel& d, const NetworkParams& p, Mode mode) {
    require_rayleigh_interference_limited(p, "access_coverage_approx");
    const double gamma_a = gamma_access(mode, d);
    const double slope = 2.0 / (p.beta - 2.0);
    const double offset = (mode == Mode::IBFD) ? interference_offset(d, p) : 0.0;
    return d.lambda_s / (lambda_bar(mode, d) * slope * gamma_a + d.lambda_s + offset);
}

namespace {

FractionResult clamp_fraction(double v) {
    FractionResult r;
    r.unclamped = v;
    r.value = std::min(1.0, std::max(0.0, v));
    r.clamped = (r.value != v);
    return r;
}

}  // namespace

FractionResult balanced_fraction(const DerivedModel& d, const NetworkParams& p, bool approx) {
    require_rayleigh_interference_limited(p, "balanced_fraction");
    const double delta = delta_of(p);
    const double m = std::min(d.mean_load, static_cast<double>(p.s_max));
    const double a_term = interference_offset(d, p);
    if (approx) {
        const double num =
            d.gamma_a_obfd - a_term * (p.beta - 2.0) / (2.0 * d.lambda_c * m);
        return clamp_fraction(num / (d.gamma_a_ibfd + d.gamma_a_obfd));
    }
    const double g_i = cotier_growth(1.0, delta, d.gamma_a_ibfd);
    const double g_o = cotier_growth(1.0, delta, d.gamma_a_obfd);
    return clamp_fraction((g_o - a_term / (d.lambda_c * m)) / (g_i + g_o));
}

double mixture_coverage_perfect_backhaul(double q, const NetworkParams& p, bool approx) {
    NetworkParams pq = p;
    pq.q = q;
    const DerivedModel dq = derive_model(pq);
    const double ci = approx ? access_coverage_approx(dq, pq, Mode::IBFD)
                             : access_coverage_rayleigh(dq, pq, Mode::IBFD);
    const double co = approx ? access_coverage_approx(dq, pq, Mode::OBFD)
                             : access_coverage_rayleigh(dq, pq, Mode::OBFD);
    return q * ci + (1.0 - q) * co;
}

FractionResult optimal_fraction(const DerivedModel& d, const NetworkParams& p, bool approx) {
    require_rayleigh_interference_limited(p, "optimal_fraction");
    const double delta = delta_of(p);
    const double m = std::min(d.mean_load, static_cast<double>(p.s_max));
    const double a_term = interference_offset(d, p);
    const double ls = d.lambda_s;
    double c, g_i, g_o;
    if (approx) {
        c = 2.0 * d.lambda_c * m / (p.beta - 2.0);
        g_i = d.gamma_a_ibfd;
        g_o = d.gamma_a_obfd;
    } else {
        c = d.lambda_c * m;
        g_i = cotier_growth(1.0, delta, d.gamma_a_ibfd);
        g_o = cotier_growth(1.0, delta, d.gamma_a_obfd);
    }
    // Stationarity of q C_I(q) + (1-q) C_O(q): both coverage denominators are
    // positive on [0,1], so the critical point solves
    //   sqrt(A + ls) (c g_o (1-q) + ls) = sqrt(ls) (A + c g_i q + ls),
    // linear in q (the quadratic's feasible root, without its degeneracy at
    // g_i^2 ls = g_o^2 (A + ls)).
    const double sa = std::sqrt(a_term + ls);
    const double sl = std::sqrt(ls);
    const double q = (sa * (c * g_o + ls) - sl * (a_term + ls)) /
                     (c * (g_o * sa + g_i * sl));
    return clamp_fraction(q);
}

double distributed_mode_fraction(double tau, const DerivedModel& d, const NetworkParams& p) {
    if (!(tau > 0.0)) throw std::domain_error("tau must be > 0");
    const double delta = delta_of(p);
    // the intensity ratio is displacement-invariant, so raw and corrected
    // intensities give the same value
    const double ratio = d.lambda_c / d.lambda_s;
    return 1.0 / (1.0 + ratio * std::pow(tau * p.p_c / p.p_s, delta));
}

double access_coverage_interference_rejection(const DerivedModel& d, const NetworkParams& p,
                                              const QuadratureSettings& qs) {
    if (p.m_antennas < 2.0 * std::min(d.mean_load, static_cast<double>(p.s_max)))
        std::cerr << "warning: antenna count below twice the served load; "
                     "nulling toward the user may not be realizable\n";

    const double gamma_a = d.gamma_a_ibfd;
    QuadratureSettings mid = qs;
    mid.rel_tol = std::max(qs.rel_tol, 1e-5);

    const auto cdf_at = [&](double r_su, double r_cu) {
        const double v_scale = p.p_s * p.theta_user() / (gamma_a * std::pow(r_su, p.beta));
        CharacteristicFunction cf;
        cf.nonnegative = false;
        cf.eval = [r_su, r_cu, &d, &p, v_scale](double w) {
            C val = laplace_sbs_user_jw(w, r_su, d, p, Mode::IBFD);
            val *= laplace_cn_sbs_jw(w, r_cu, d, p);
            val *= std::pow(C(1.0, w * v_scale), -p.k_user);
            if (p.n0 > 0.0) val *= std::polar(1.0, w * p.n0);
            return val;
        };
        QuadratureSettings inner = qs;
        inner.oscillation_scale = v_scale + p.n0;
        return gil_pelaez_cdf(cf, 0.0, inner);
    };

    double err_outer = 0.0;
    return serving_average(
        [&](double r_su) {
            double err_mid = 0.0;
            return serving_average([&](double r_cu) { return cdf_at(r_su, r_cu); },
                                   d.lambda_c, mid, err_mid);
        },
        d.lambda_s, qs, err_outer);
}

}  // namespace fdcov::analytic
