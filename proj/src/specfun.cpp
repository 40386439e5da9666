#include "fdcov/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace fdcov {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_nonpositive_integer(double x, double tol = 1e-12) {
    return x <= tol && std::abs(x - std::round(x)) < tol;
}

template <class S>
double mag(const S& v) {
    return std::abs(v);
}

// Direct power series; requires |z| < 1 unless a or b terminates it.
template <class S>
S hyp2f1_series(double a, double b, double c, S z, double rel_tol, int max_iter = 100000) {
    S term = S(1.0);
    S sum = S(1.0);
    int quiet = 0;
    for (int n = 0; n < max_iter; ++n) {
        const double num = (a + n) * (b + n);
        if (num == 0.0) return sum;  // terminating polynomial
        term *= z * (num / ((c + n) * (n + 1.0)));
        sum += term;
        if (mag(term) <= rel_tol * mag(sum)) {
            if (++quiet >= 2) return sum;
        } else {
            quiet = 0;
        }
    }
    throw NonConvergence("2F1 series stalled", mag(sum), mag(term));
}

// Gauss summation 2F1(a,b;c;1) = G(c)G(c-a-b) / (G(c-a)G(c-b)); reciprocal
// gamma poles in the denominator give 0.
double hyp2f1_at_one(double a, double b, double c) {
    if (!(c - a - b > 0.0))
        throw std::domain_error("2F1 at z=1 requires c-a-b > 0");
    const SignedLogGamma n1 = signed_log_gamma(c);
    const SignedLogGamma n2 = signed_log_gamma(c - a - b);
    const SignedLogGamma d1 = signed_log_gamma(c - a);
    const SignedLogGamma d2 = signed_log_gamma(c - b);
    if (d1.sign == 0 || d2.sign == 0) return 0.0;
    const double lg = n1.log_abs + n2.log_abs - d1.log_abs - d2.log_abs;
    return n1.sign * n2.sign * d1.sign * d2.sign * std::exp(lg);
}

// Large-|z| branch for the family 2F1(a, b; b+1; z) with a > 0, b in (-1,0),
// z off [0, inf). Writing x = -z and d = -b:
//   2F1 = (1+x)^{-a} + C x^d - a * sum_m (-1)^m C(a+m,m) x^{-a-m} / (d+a+m),
//   C   = Gamma(1-d) Gamma(a+d) / Gamma(a),
// a convergent expansion for |x| > 1 (binomial tail of the defining integral).
template <class S>
S hyp2f1_unit_c_large(double a, double b, S z, double rel_tol) {
    const double d = -b;
    const S x = -z;
    const double coef =
        std::exp(std::lgamma(1.0 - d) + std::lgamma(a + d) - std::lgamma(a));
    S sum = S(0.0);
    double binom = 1.0;  // C(a+m, m)
    S xpow = std::pow(x, -a);
    const S inv_x = S(1.0) / x;
    double sign = 1.0;
    for (int m = 0; m < 400; ++m) {
        const S term = S(sign * binom / (d + a + m)) * xpow;
        sum += term;
        if (mag(term) <= rel_tol * std::max(mag(sum), 1e-300) && m > 2) {
            return std::pow(S(1.0) + x, -a) + S(coef) * std::pow(x, d) - S(a) * sum;
        }
        binom *= (a + m + 1.0) / (m + 1.0);
        xpow *= inv_x;
        sign = -sign;
    }
    throw NonConvergence("2F1 large-argument expansion stalled", mag(sum), 0.0);
}

// direct_ok: the caller established the plain series converges at z
// (real z in [0,1), or a small-|z| complex argument).
template <class S>
S hyp2f1_impl(double a, double b, double c, S z, double rel_tol, bool direct_ok) {
    if (is_nonpositive_integer(c) &&
        !(is_nonpositive_integer(a) && a > c - 0.5) &&
        !(is_nonpositive_integer(b) && b > c - 0.5))
        throw std::domain_error("2F1: c must not be a non-positive integer");

    if (mag(z) == 0.0) return S(1.0);
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
        return hyp2f1_series(a, b, c, z, rel_tol);
    if (direct_ok) return hyp2f1_series(a, b, c, z, rel_tol);

    // family fast path: c = b + 1 with b in (-1,0), a > 0
    const bool family = std::abs(c - (b + 1.0)) < 1e-12 && b > -1.0 && b < 0.0 && a > 0.0;
    if (family && mag(z) > 1.27) return hyp2f1_unit_c_large(a, b, z, rel_tol);

    // Pfaff transform maps Re(z) <= 0 inside the unit disk; ordering a >= b
    // picks the variant whose series still converges as z' -> 1.
    double aa = a, bb = b;
    if (aa < bb) std::swap(aa, bb);
    const S zp = z / (z - S(1.0));
    return std::pow(S(1.0) - z, -bb) * hyp2f1_series(c - aa, bb, c, zp, rel_tol);
}

// Regularized lower incomplete gamma by series, a > 0.
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NonConvergence("incomplete gamma series stalled", sum, del);
}

// Regularized upper incomplete gamma by continued fraction (Lentz), a > 0.
double gamma_q_cf(double a, double x) {
    const double eps = 1e-16;
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw NonConvergence("incomplete gamma continued fraction stalled", h, 0.0);
}

// Unregularized upper gamma for a > 0, x >= 0.
double upper_gamma_pos(double a, double x) {
    if (x == 0.0) return std::tgamma(a);
    if (x < a + 1.0) return std::tgamma(a) * (1.0 - gamma_p_series(a, x));
    return std::tgamma(a) * gamma_q_cf(a, x);
}

// Upper gamma on complex z: power series below, Lentz continued fraction
// above. Valid off the negative real axis.
std::complex<double> upper_gamma_complex(double a, std::complex<double> z) {
    using C = std::complex<double>;
    const double az = std::abs(z);
    if (az < 16.0) {
        // gamma_l(a,z) = z^a sum (-z)^n / (n! (a+n)), entire apart from z^a
        C term(1.0, 0.0);
        C sum = term / a;
        for (int n = 1; n < 400; ++n) {
            term *= -z / static_cast<double>(n);
            const C add = term / (a + n);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum) && n > 4) break;
        }
        return std::tgamma(a) - std::pow(z, a) * sum;
    }
    const double eps = 1e-15;
    const double fpmin = std::numeric_limits<double>::min() / eps;
    C b = z + 1.0 - a;
    C c = 1.0 / fpmin;
    C d = 1.0 / b;
    C h = d;
    for (int i = 1; i < 20000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const C del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps)
            return std::exp(-z + a * std::log(z)) * h;
    }
    throw NonConvergence("complex incomplete gamma stalled", std::abs(h), 0.0);
}

}  // namespace

SignedLogGamma signed_log_gamma(double x) {
    if (x > 0.0) return {std::lgamma(x), 1};
    if (std::abs(x - std::round(x)) < 1e-300 || x == std::floor(x))
        return {std::numeric_limits<double>::infinity(), 0};
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x)), 1-x > 1 here
    const double s = std::sin(kPi * x);
    if (s == 0.0) return {std::numeric_limits<double>::infinity(), 0};
    const double log_abs = std::log(kPi) - std::log(std::abs(s)) - std::lgamma(1.0 - x);
    return {log_abs, s > 0.0 ? 1 : -1};
}

double real_gamma(double x) {
    const SignedLogGamma g = signed_log_gamma(x);
    if (g.sign == 0)
        throw std::domain_error("gamma pole at non-positive integer");
    return g.sign * std::exp(g.log_abs);
}

double gauss_2f1(double a, double b, double c, double z, double rel_tol) {
    if (z > 1.0 + 1e-12)
        throw std::domain_error("2F1: z must be <= 1");
    if (z >= 1.0 - 1e-15 && z <= 1.0 + 1e-12 &&
        !(is_nonpositive_integer(a) || is_nonpositive_integer(b))) {
        if (is_nonpositive_integer(c))
            throw std::domain_error("2F1: c must not be a non-positive integer");
        return hyp2f1_at_one(a, b, c);
    }
    return hyp2f1_impl(a, b, c, z, rel_tol, /*direct_ok=*/z >= 0.0);
}

std::complex<double> gauss_2f1(double a, double b, double c, std::complex<double> z,
                               double rel_tol) {
    if (z.real() > 1e-12 && std::abs(z.imag()) < 1e-12 * std::abs(z.real()))
        throw std::domain_error("complex 2F1 supported for Re(z) <= 0");
    return hyp2f1_impl(a, b, c, z, rel_tol, /*direct_ok=*/std::abs(z) < 0.5);
}

double upper_inc_gamma(double a, double x) {
    if (x < 0.0) throw std::domain_error("upper_inc_gamma: x must be >= 0");
    if (a > 0.0) return upper_gamma_pos(a, x);
    if (x == 0.0)
        throw std::domain_error("upper_inc_gamma diverges at x=0 for a <= 0");
    if (is_nonpositive_integer(a))
        throw std::domain_error("upper_inc_gamma: a must not be a non-positive integer");
    // climb to positive shape, then walk back down:
    //   G(a,x) = (G(a+1,x) - x^a e^{-x}) / a
    const int steps = static_cast<int>(std::ceil(-a));
    const double a_top = a + steps;
    double g = upper_gamma_pos(a_top, x);
    const double lx = std::log(x);
    for (int k = steps - 1; k >= 0; --k) {
        const double ak = a + k;
        g = (g - std::exp(ak * lx - x)) / ak;
    }
    return g;
}

std::complex<double> upper_inc_gamma(double a, std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw std::domain_error("complex upper_inc_gamma: z off the negative real axis");
    if (a > 0.0) return upper_gamma_complex(a, z);
    if (is_nonpositive_integer(a))
        throw std::domain_error("upper_inc_gamma: a must not be a non-positive integer");
    const int steps = static_cast<int>(std::ceil(-a));
    std::complex<double> g = upper_gamma_complex(a + steps, z);
    const std::complex<double> lz = std::log(z);
    for (int k = steps - 1; k >= 0; --k) {
        const double ak = a + k;
        g = (g - std::exp(ak * lz - z)) / ak;
    }
    return g;
}

double lower_inc_gamma(double a, double x) {
    if (a <= 0.0) throw std::domain_error("lower_inc_gamma: a must be > 0");
    if (x < 0.0) throw std::domain_error("lower_inc_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return std::tgamma(a) * gamma_p_series(a, x);
    return std::tgamma(a) * (1.0 - gamma_q_cf(a, x));
}

double beta_fn(double a, double b) {
    const SignedLogGamma ga = signed_log_gamma(a);
    const SignedLogGamma gb = signed_log_gamma(b);
    if (ga.sign == 0 || gb.sign == 0)
        throw std::domain_error("beta_fn pole at non-positive integer argument");
    const SignedLogGamma gab = signed_log_gamma(a + b);
    if (gab.sign == 0) return 0.0;  // reciprocal pole
    return ga.sign * gb.sign * gab.sign * std::exp(ga.log_abs + gb.log_abs - gab.log_abs);
}

namespace {

// Repeated averaging of the partial sums of a (near-)alternating series.
// Returns the extrapolated limit; err gets the spread of the last pass.
double average_alternating(const std::vector<double>& terms, double& err) {
    std::vector<double> s(terms.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        acc += terms[i];
        s[i] = acc;
    }
    double prev = s.back();
    while (s.size() > 1) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
        s.pop_back();
        if (s.size() <= 2) {
            err = std::abs(s.front() - prev);
        }
        prev = s.front();
    }
    err = std::max(err, 1e-18);
    return s.front();
}

}  // namespace

double gil_pelaez_cdf(const CharacteristicFunction& phi, double x,
                      const QuadratureSettings& settings) {
    settings.validate();
    if (!phi.eval) throw std::domain_error("gil_pelaez_cdf: missing evaluator");
    if (x < 0.0 && phi.nonnegative) return 0.0;

    const double hard_floor = std::max(settings.abs_tol, 1e-13);
    if (phi.nonnegative && phi.real_laplace && x > 0.0) {
        // Laplace tail bounds: P(X > x) <= (1 - L(1/x)) / (1 - 1/e) and
        // P(X <= x) <= e^c L(c/x) for any c > 0.
        const double l1 = phi.real_laplace(1.0 / x);
        if ((1.0 - l1) < 0.2 * hard_floor * (1.0 - std::exp(-1.0))) return 1.0;
        double low = std::exp(1.0) * l1;
        for (double cexp : {4.0, 16.0})
            low = std::min(low, std::exp(cexp) * phi.real_laplace(cexp / x));
        if (low < 0.2 * hard_floor) return 0.0;
    }

    const auto g = [&phi, x](double w) {
        const std::complex<double> rot(std::cos(w * x), -std::sin(w * x));
        return std::imag(phi.eval(w) * rot) / w;
    };

    const double ax = std::abs(x);
    const double scale = std::max({ax, settings.oscillation_scale, 1.0});
    const double s0 = 1.0 / scale;
    const double half_period = (x != 0.0) ? kPi / ax : std::numeric_limits<double>::infinity();

    SubdivisionBudget budget{settings.max_subdivisions};
    double total = 0.0;
    double err = 0.0;

    // Descending octaves resolve the w -> 0 behaviour (integrand ~ w^{d-1}).
    {
        double hi = s0;
        int dead = 0;
        double last = 0.0;
        for (int k = 0; k < 72 && dead < settings.tail_stop_panels; ++k) {
            const double piece = integrate_adaptive(g, 0.5 * hi, hi, settings.rel_tol,
                                                    settings.abs_tol, budget, err);
            total += piece;
            last = std::abs(piece);
            dead = (last < settings.abs_tol) ? dead + 1 : 0;
            hi *= 0.5;
        }
        err += 3.0 * last;  // remainder of the geometric descent
    }

    // Ascending octaves until either the tail dies or the half-period grid
    // becomes the natural unit.
    bool finished = false;
    double lo = s0;
    {
        int dead = 0;
        double last = 0.0;
        for (int k = 0; k < 72; ++k) {
            if ((x != 0.0) && (lo >= 4.0 * half_period)) break;  // switch to half periods
            const double hi = 2.0 * lo;
            const double piece =
                integrate_adaptive(g, lo, hi, settings.rel_tol, settings.abs_tol, budget, err);
            total += piece;
            last = std::abs(piece);
            // require a quiet envelope too: octave panels can cancel internally
            const double env =
                std::max(std::abs(phi.eval(lo)), std::abs(phi.eval(hi))) * 0.6931;
            dead = (last < settings.abs_tol && env < 10.0 * settings.abs_tol) ? dead + 1 : 0;
            lo = hi;
            if (dead >= settings.tail_stop_panels) {
                finished = true;
                break;
            }
            if (k == 71) err += 3.0 * (last + env);
        }
    }

    if (!finished && x != 0.0) {
        // Half-period panels; the alternating tail is either summed until it
        // dies or extrapolated by repeated averaging.
        double m0 = std::ceil(lo / half_period);
        if (m0 * half_period > lo + 1e-300) {
            total += integrate_adaptive(g, lo, m0 * half_period, settings.rel_tol,
                                        settings.abs_tol, budget, err);
        }
        std::vector<double> terms;
        terms.reserve(160);
        int dead = 0;
        bool summed = false;
        for (int m = 0; m < 160; ++m) {
            const double a = (m0 + m) * half_period;
            const double piece = integrate_adaptive(g, a, a + half_period, settings.rel_tol,
                                                    settings.abs_tol, budget, err);
            terms.push_back(piece);
            dead = (std::abs(piece) < settings.abs_tol) ? dead + 1 : 0;
            if (dead >= settings.tail_stop_panels) {
                for (double t : terms) total += t;
                err += std::abs(piece);
                summed = true;
                break;
            }
            if (budget.remaining < settings.max_subdivisions / 8 && terms.size() >= 24) break;
        }
        if (!summed) {
            double accel_err = 0.0;
            total += average_alternating(terms, accel_err);
            err += accel_err;
            if (accel_err > 200.0 * std::max(settings.abs_tol, settings.rel_tol))
                throw NonConvergence("Gil-Pelaez tail extrapolation did not settle",
                                     0.5 - total / kPi, accel_err);
        }
    }

    const double f = 0.5 - total / kPi;
    const double tol_overall = std::max(50.0 * settings.abs_tol, settings.rel_tol);
    if (budget.remaining <= 0 && err > 20.0 * tol_overall)
        throw NonConvergence("Gil-Pelaez subdivision cap hit before tolerance", f, err);
    return std::min(1.0, std::max(0.0, f));
}

}  // namespace fdcov
