#include "fdcov/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdcov {

void NetworkParams::validate() const {
    if (!(beta > 2.0)) throw std::domain_error("beta must be > 2");
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("q must be in [0,1]");
    if (m_antennas < 1) throw std::domain_error("m_antennas must be >= 1");
    if (s_max < 1) throw std::domain_error("s_max must be >= 1");
    if (!(lambda_c_raw > 0.0)) throw std::domain_error("lambda_c_raw must be > 0");
    if (!(lambda_s_raw > 0.0)) throw std::domain_error("lambda_s_raw must be > 0");
    if (!(p_c > 0.0)) throw std::domain_error("p_c must be > 0");
    if (!(p_s > 0.0)) throw std::domain_error("p_s must be > 0");
    if (!(n0 >= 0.0)) throw std::domain_error("n0 must be >= 0");
    if (!(shadow_sigma >= 0.0)) throw std::domain_error("shadow_sigma must be >= 0");
    if (!(k_user > 0.0)) throw std::domain_error("k_user must be > 0");
    if (!(k_sbs > 0.0)) throw std::domain_error("k_sbs must be > 0");
    if (!(r_th > 0.0)) throw std::domain_error("r_th must be > 0");
}

double lognormal_fractional_moment(double mu, double sigma, double beta) {
    if (!(beta > 2.0)) throw std::domain_error("beta must be > 2");
    if (!(sigma >= 0.0)) throw std::domain_error("sigma must be >= 0");
    const double a = 2.0 * sigma / beta;
    return std::exp(2.0 * mu / beta + 0.5 * a * a);
}

DerivedModel derive_model(const NetworkParams& p) {
    p.validate();
    DerivedModel d;
    const double moment = lognormal_fractional_moment(p.shadow_mu, p.shadow_sigma, p.beta);
    d.lambda_c = p.lambda_c_raw * moment;
    d.lambda_s = p.lambda_s_raw * moment;
    d.mean_load = d.lambda_s / d.lambda_c;
    const double served = std::min(d.mean_load, static_cast<double>(p.s_max)) * d.lambda_c;
    d.lambda_bar_si = p.q * served;
    d.lambda_bar_so = (1.0 - p.q) * served;
    d.i_si = p.p_s / std::pow(10.0, p.xi_db / 10.0);
    d.gamma_a_ibfd = std::exp2(p.r_th) - 1.0;
    d.gamma_a_obfd = std::exp2(2.0 * p.r_th) - 1.0;
    return d;
}

double load_pmf(double mean_load, int n) {
    if (!(mean_load > 0.0)) throw std::domain_error("mean_load must be > 0");
    if (n < 0) throw std::domain_error("n must be >= 0");
    const double b = LoadDistribution::shape_b;
    const double log_p = b * std::log(b) + std::lgamma(n + b) + n * std::log(mean_load) -
                         std::lgamma(n + 1.0) - std::lgamma(b) -
                         (n + b) * std::log(b + mean_load);
    return std::exp(log_p);
}

LoadDistribution make_load_distribution(double mean_load) {
    LoadDistribution ld;
    ld.mean_load = mean_load;
    const int cap = std::max(8, static_cast<int>(64.0 * mean_load));
    double cum = 0.0;
    for (int n = 0; n <= cap; ++n) {
        ld.pmf.push_back(load_pmf(mean_load, n));
        cum += ld.pmf.back();
        if (cum >= 1.0 - 1e-6) {
            ld.n_max = n;
            return ld;
        }
    }
    ld.n_max = cap;
    return ld;
}

double backhaul_access_prob(int n_s, int s_max) {
    if (n_s < 1) throw std::domain_error("backhaul_access_prob requires n_s >= 1");
    if (s_max < 1) throw std::domain_error("s_max must be >= 1");
    return std::min(1.0, static_cast<double>(s_max) / static_cast<double>(n_s));
}

double backhaul_threshold(int n_s, const NetworkParams& p, Mode mode) {
    if (n_s < 1) throw std::domain_error("backhaul_threshold requires n_s >= 1");
    const int m = std::min(n_s, p.s_max);
    if (p.m_antennas <= m)
        throw std::domain_error("backhaul_threshold outside the massive-MIMO regime (M <= streams)");
    const double alpha = backhaul_access_prob(n_s, p.s_max);
    const double rate = (mode == Mode::IBFD) ? p.r_th : 2.0 * p.r_th;
    return (static_cast<double>(m) / (p.m_antennas - m + 1.0)) *
           (std::exp2(rate / alpha) - 1.0);
}

double pilot_contamination_intensity(const DerivedModel& d, const LoadDistribution& load,
                                     int s_max) {
    if (s_max < 1) throw std::domain_error("s_max must be >= 1");
    double keep = 0.0;  // probability a generic CN leaves a given pilot unused
    const int top = std::min(load.n_max, s_max);
    for (int n = 0; n <= top; ++n)
        keep += (1.0 - static_cast<double>(n) / s_max) * load.pmf[n];
    return d.lambda_c * (1.0 - keep);
}

}  // namespace fdcov
