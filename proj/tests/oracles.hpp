#pragma once

// Test-only reference implementations, kept independent of the library code
// they check: plain long-double series and Simpson integration only.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace oracles {

// ---- brute-force hypergeometric series (long double) ----

template <class S>
S hyp2f1_series_raw(long double a, long double b, long double c, S z, int max_terms = 2000000) {
    S term = S(1.0L);
    S sum = S(1.0L);
    for (int n = 0; n < max_terms; ++n) {
        term *= z * ((a + n) * (b + n) / ((c + n) * (n + 1.0L)));
        sum += term;
        if (std::abs(term) <= 1e-19L * std::abs(sum) && n > 4) return sum;
    }
    throw std::runtime_error("oracle 2F1 series did not converge");
}

// z <= 0 via the Pfaff map (independent re-derivation, long double).
inline long double hyp2f1_oracle(long double a, long double b, long double c, long double z) {
    if (z == 0.0L) return 1.0L;
    if (z > 0.0L) return hyp2f1_series_raw(a, b, c, z);
    if (a < b) std::swap(a, b);
    const long double zp = z / (z - 1.0L);
    return std::pow(1.0L - z, -b) * hyp2f1_series_raw(c - a, b, c, zp);
}

inline std::complex<long double> hyp2f1_oracle_c(long double a, long double b, long double c,
                                                 std::complex<long double> z) {
    if (std::abs(z) == 0.0L) return 1.0L;
    if (std::abs(z) < 0.45L) return hyp2f1_series_raw(a, b, c, z);
    if (a < b) std::swap(a, b);
    const std::complex<long double> zp = z / (z - 1.0L);
    return std::pow(std::complex<long double>(1.0L) - z, -b) *
           hyp2f1_series_raw(c - a, b, c, zp);
}

// ---- adaptive Simpson (long double), real or complex integrand ----

template <class F, class S>
S simpson_rec(const F& f, long double a, long double b, S fa, S fm, S fb, S whole,
              long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m);
    const long double rm = 0.5L * (m + b);
    const S flm = f(lm), frm = f(rm);
    const S left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const S right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    const S refined = left + right;
    if (depth <= 0 || std::abs(refined - whole) < 15.0L * tol)
        return refined + (refined - whole) / 15.0L;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5L, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5L, depth - 1);
}

template <class S = long double, class F>
S integrate(const F& f, long double a, long double b, long double tol = 1e-13L) {
    const S fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
    const S whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// ---- incomplete gamma oracles from the defining integrals ----

inline long double upper_gamma_oracle(long double a, long double x) {
    // integrate t^{a-1} e^{-t} far enough that the remainder is negligible
    const long double hi = x + std::max(60.0L, 10.0L * std::sqrt(std::abs(x) + 1.0L));
    return integrate([a](long double t) { return std::pow(t, a - 1.0L) * std::exp(-t); }, x, hi);
}

inline std::complex<long double> upper_gamma_oracle_c(long double a,
                                                      std::complex<long double> z) {
    // Gamma(a, z) = e^{-z} Int_0^inf (z+s)^{a-1} e^{-s} ds along the real ray
    const auto f = [a, z](long double s) {
        return std::pow(z + s, a - 1.0L) * std::exp(-s);
    };
    const std::complex<long double> body = integrate<std::complex<long double>>(f, 0.0L, 80.0L);
    return std::exp(-z) * body;
}

// regularized lower incomplete gamma by plain series (a > 0)
inline long double gamma_cdf_oracle(long double k, long double theta, long double x) {
    if (x <= 0.0L) return 0.0L;
    const long double y = x / theta;
    long double term = 1.0L / k;
    long double sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= y / (k + n);
        sum += term;
        if (term < 1e-20L * sum) break;
    }
    return std::min(1.0L, sum * std::exp(-y + k * std::log(y) - std::lgamma(k)));
}

}  // namespace oracles
