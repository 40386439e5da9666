#pragma once

#include <complex>

#include "fdcov/network_model.hpp"
#include "fdcov/quadrature.hpp"
#include "fdcov/report.hpp"

namespace fdcov::analytic {

/// Laplace transform of the co-tier interference at a user served from
/// distance r_su; the interfering set is the backhauled in-band (or, for
/// Mode::OBFD, out-of-band) small cells outside r_su.
double laplace_sbs_user(double t, double r_su, const DerivedModel& d, const NetworkParams& p,
                        Mode mode = Mode::IBFD);

/// Laplace transform of the hub interference at a user (no exclusion ball:
/// the nearest hub can be arbitrarily close).
double laplace_cn_user(double t, const DerivedModel& d, const NetworkParams& p);

/// Laplace transform of the co-tier interference at a small cell's backhaul
/// receiver (the r -> 0 limit of the user-side transform).
double laplace_sbs_sbs(double t, const DerivedModel& d, const NetworkParams& p);

/// Laplace transform of the hub interference at a small cell whose serving
/// hub sits at r_cs (interferers excluded inside that radius).
double laplace_cn_sbs(double t, double r_cs, const DerivedModel& d, const NetworkParams& p);

/// The same transforms evaluated at t = -jw for the inversion integrals.
std::complex<double> laplace_sbs_user_jw(double w, double r_su, const DerivedModel& d,
                                         const NetworkParams& p, Mode mode = Mode::IBFD);
std::complex<double> laplace_cn_user_jw(double w, const DerivedModel& d,
                                        const NetworkParams& p);
std::complex<double> laplace_sbs_sbs_jw(double w, const DerivedModel& d,
                                        const NetworkParams& p);
std::complex<double> laplace_cn_sbs_jw(double w, double r_cs, const DerivedModel& d,
                                       const NetworkParams& p);

/// Coefficient of (t Ps theta)^{2/beta} in -log laplace_sbs_sbs, per unit
/// interferer intensity divided by pi. General Beta-function route and the
/// Rayleigh cosecant shortcut (equal at k = 1).
double sbs_sbs_exponent_coefficient(double k, double beta);
double sbs_sbs_exponent_coefficient_rayleigh(double beta);

/// Access-link rate coverage via Gil-Pelaez inversion with Gamma fading on
/// the serving link (transform-absorbed) and noise included.
double access_coverage(Mode mode, const DerivedModel& d, const NetworkParams& p,
                       const QuadratureSettings& qs = {});

/// Backhaul-link rate coverage: load-averaged (N_s >= 1) inversion of the
/// aggregate hub + co-tier interference against the per-load threshold.
double backhaul_coverage(Mode mode, const DerivedModel& d, const NetworkParams& p,
                         const LoadDistribution& load, const QuadratureSettings& qs = {});

/// Full analytic report: access x backhaul per mode, user mixture over q.
CoverageReport rate_coverage(const DerivedModel& d, const NetworkParams& p,
                             const LoadDistribution& load, const QuadratureSettings& qs = {});

/// Closed form for Rayleigh access fading in the interference-limited regime.
double access_coverage_rayleigh(const DerivedModel& d, const NetworkParams& p, Mode mode);

/// Same with the small-threshold hypergeometric approximation.
double access_coverage_approx(const DerivedModel& d, const NetworkParams& p, Mode mode);

/// A fraction solved in closed form, clamped to [0,1] when the unclamped
/// root falls outside (boundary optima are meaningful operating points).
struct FractionResult {
    double value = 0.0;
    bool clamped = false;
    double unclamped = 0.0;
};

/// In-band fraction equalizing the two per-mode access coverages under
/// perfect backhaul (exact hypergeometric or approximate variant).
FractionResult balanced_fraction(const DerivedModel& d, const NetworkParams& p, bool approx);

/// In-band fraction maximizing the typical user's access coverage under
/// perfect backhaul (exact or approximate variant).
FractionResult optimal_fraction(const DerivedModel& d, const NetworkParams& p, bool approx);

/// Typical-user access coverage mixture under perfect backhaul at a given q
/// (the objective optimal_fraction maximizes).
double mixture_coverage_perfect_backhaul(double q, const NetworkParams& p, bool approx);

/// Expected in-band fraction produced by the threshold mode-selection rule.
double distributed_mode_fraction(double tau, const DerivedModel& d, const NetworkParams& p);

/// In-band access coverage when the hub serving the user's small cell is
/// nulled toward the user; the rejected hub is approximated by the user's
/// nearest hub, whose distance law weights an exclusion-ball transform.
double access_coverage_interference_rejection(const DerivedModel& d, const NetworkParams& p,
                                              const QuadratureSettings& qs = {});

}  // namespace fdcov::analytic
