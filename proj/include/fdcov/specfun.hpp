#pragma once

#include <complex>
#include <functional>

#include "fdcov/quadrature.hpp"

namespace fdcov {

/// phi(w) = E[exp(jwX)] for w > 0, i.e. the Laplace transform of X evaluated
/// at -jw. For the unit-mean exponential this is 1/(1 - jw); for Gamma(k,theta)
/// it is (1 - jw theta)^{-k}. |phi| <= 1 and phi -> 1 as w -> 0+.
struct CharacteristicFunction {
    std::function<std::complex<double>(double)> eval;
    /// Optional real-axis Laplace transform E[exp(-tX)], t > 0. Only
    /// meaningful for nonnegative X; enables cheap tail short-circuits.
    std::function<double(double)> real_laplace;
    /// X is supported on [0, inf); the CDF left of 0 is identically 0.
    bool nonnegative = true;
};

/// Gauss hypergeometric function 2F1(a,b;c;z) for real z <= 1.
/// Negative arguments go through the Pfaff transform before summation;
/// z = 1 uses the Gauss summation value. Throws std::domain_error for a
/// non-positive-integer c or z > 1, NonConvergence if the series stalls.
double gauss_2f1(double a, double b, double c, double z, double rel_tol = 1e-13);

/// 2F1 continued to complex z with Re(z) <= 0 (what the interference
/// transforms evaluate on the imaginary axis).
std::complex<double> gauss_2f1(double a, double b, double c, std::complex<double> z,
                               double rel_tol = 1e-13);

/// Upper incomplete gamma, a real (negative non-integers reached by the
/// recurrence through positive a), x > 0 required when a <= 0.
double upper_inc_gamma(double a, double x);

/// Upper incomplete gamma on complex arguments off the negative real axis.
std::complex<double> upper_inc_gamma(double a, std::complex<double> z);

/// Lower incomplete gamma, a > 0, x >= 0.
double lower_inc_gamma(double a, double x);

/// Beta function with negative non-integer arguments routed through the
/// gamma reflection formula. Throws std::domain_error at argument poles.
double beta_fn(double a, double b);

/// log|Gamma(x)| and the sign of Gamma(x); sign 0 marks a pole.
struct SignedLogGamma {
    double log_abs;
    int sign;
};
SignedLogGamma signed_log_gamma(double x);

/// Gamma(x) for real x (negative non-integers included).
double real_gamma(double x);

/// Gil-Pelaez inversion: F(x) = 1/2 - (1/pi) Int_0^inf Im[phi(w) e^{-jwx}]/w dw,
/// clamped to [0,1]. The axis is scanned in octave panels around
/// 1/max(|x|, oscillation_scale, 1), descending until the origin contribution
/// dies and ascending into half-period panels whose alternating tail is summed
/// directly or by repeated averaging. Throws NonConvergence when the
/// subdivision budget is exhausted before the tolerance is met.
double gil_pelaez_cdf(const CharacteristicFunction& phi, double x,
                      const QuadratureSettings& settings = {});

}  // namespace fdcov
