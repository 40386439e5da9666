#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fdcov {

/// Tolerances and limits shared by every quadrature-backed routine.
struct QuadratureSettings {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    int max_subdivisions = 2000;
    /// Consecutive sub-tolerance tail panels that end a semi-infinite scan.
    int tail_stop_panels = 3;
    /// Frequency-axis scale hint for inversion integrals whose oscillation
    /// is carried inside the integrand rather than by the CDF argument.
    /// 0 means "derive the scale from the argument".
    double oscillation_scale = 0.0;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::domain_error("QuadratureSettings: tolerances must be > 0");
        if (max_subdivisions < 1)
            throw std::domain_error("QuadratureSettings: max_subdivisions must be >= 1");
        if (tail_stop_panels < 1)
            throw std::domain_error("QuadratureSettings: tail_stop_panels must be >= 1");
    }
};

/// Raised when a subdivision cap is hit before the tolerance is met.
/// Carries the best value reached and the error estimate it came with.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double partial, double achieved)
        : std::runtime_error(what + " (partial=" + std::to_string(partial) +
                             ", err~" + std::to_string(achieved) + ")"),
          partial_value(partial),
          achieved_error(achieved) {}

    double partial_value;
    double achieved_error;
};

/// Shared work counter so nested integrals cannot silently run away.
struct SubdivisionBudget {
    int remaining = 2000;
    bool take() {
        if (remaining <= 0) return false;
        --remaining;
        return true;
    }
};

/// 15-point Kronrod rule with embedded 7-point Gauss error estimate on [a,b].
template <class F>
double gk15(F&& f, double a, double b, double& err) {
    // node, Gauss weight, Kronrod weight
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529}};

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double y0 = f(mid);
    double g7 = nw[0][1] * y0;
    double k15 = nw[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * nw[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += nw[i][1] * yi;
        k15 += nw[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;

    err = std::abs(k15 - g7);
    // Standard QUADPACK-style sharpening of the embedded estimate.
    err = 200.0 * err * std::sqrt(err);
    if (!(err < std::abs(k15 - g7)) && std::abs(k15 - g7) > 0.0)
        err = std::abs(k15 - g7);
    return k15;
}

/// Adaptive bisection on a finite interval. Returns the best value reached;
/// error (including any unresolved panels once the budget is gone) is added
/// to err_accum. Throws only on a non-finite integrand sample.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                          SubdivisionBudget& budget, double& err_accum) {
    if (!(b > a)) return 0.0;
    struct Seg {
        double a, b;
    };
    std::vector<Seg> stack;
    stack.push_back({a, b});
    const double full = b - a;
    double sum = 0.0;

    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double e = 0.0;
        double v;
        if (budget.take()) {
            v = gk15(f, s.a, s.b, e);
        } else {
            // out of budget: keep the coarse value and charge its error
            v = gk15(f, s.a, s.b, e);
            sum += v;
            err_accum += e;
            continue;
        }
        if (!std::isfinite(v))
            throw NonConvergence("non-finite integrand sample", sum, HUGE_VAL);
        const double local_abs = abs_tol * ((s.b - s.a) / full);
        if (e <= std::max(local_abs, rel_tol * std::abs(v)) || (s.b - s.a) < 1e-15 * full) {
            sum += v;
            err_accum += e;
        } else {
            const double m = 0.5 * (s.a + s.b);
            stack.push_back({s.a, m});
            stack.push_back({m, s.b});
        }
    }
    return sum;
}

}  // namespace fdcov
