#pragma once

namespace fdcov {

enum class Method { AnalyticExact, AnalyticRayleigh, AnalyticApprox, MonteCarlo };

const char* method_name(Method m);

/// Per-mode and typical-user rate coverage with its access/backhaul split.
/// Invariants: every probability in [0,1]; c_ibfd = c_access_ibfd *
/// c_backhaul_ibfd (same for OBFD); c_user = q c_ibfd + (1-q) c_obfd.
struct CoverageReport {
    double c_access_ibfd = 0.0;
    double c_access_obfd = 0.0;
    double c_backhaul_ibfd = 0.0;
    double c_backhaul_obfd = 0.0;
    double c_ibfd = 0.0;
    double c_obfd = 0.0;
    double c_user = 0.0;
    Method method = Method::AnalyticExact;
    /// Quadrature error bound (analytic) or the widest 95% CI half-width (MC).
    double error = 0.0;

    // Monte Carlo diagnostics
    long drops = 0;
    long resampled = 0;
    double ci_half_ibfd = 0.0;
    double ci_half_obfd = 0.0;
    double ci_half_user = 0.0;
    /// Fraction of drops whose typical small cell chose in-band operation
    /// (only meaningful under distributed mode selection; -1 otherwise).
    double realized_ibfd_fraction = -1.0;
};

}  // namespace fdcov
