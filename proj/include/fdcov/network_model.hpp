#pragma once

#include <vector>

namespace fdcov {

enum class Mode { IBFD, OBFD };

/// Raw deployment and channel parameters. Defaults reproduce the reference
/// simulation setup; intensities are the pre-displacement values.
struct NetworkParams {
    double lambda_c_raw = 10.0;  ///< hub (CN) intensity, points per unit area
    double lambda_s_raw = 50.0;  ///< small-cell intensity
    double lambda_u_raw = 50.0;  ///< user intensity (one user per SBS; not consumed)
    double p_c = 10.0;           ///< CN total transmit power, W
    double p_s = 2.0;            ///< SBS transmit power, W
    double beta = 4.0;           ///< path-loss exponent, > 2
    double xi_db = 120.0;        ///< self-interference cancellation, dB
    int m_antennas = 500;        ///< CN antennas
    int s_max = 50;              ///< max backhaul streams per CN
    double r_th = 1.0;           ///< target rate, bits/s/Hz
    double q = 0.5;              ///< in-band fraction of SBSs
    double shadow_mu = 1.0;      ///< log-normal shadowing location (natural log)
    double shadow_sigma = 2.0;   ///< log-normal shadowing scale
    double k_user = 2.0;         ///< Gamma fading shape on SBS->user links
    double k_sbs = 0.5;          ///< Gamma fading shape on SBS->SBS links
    double n0 = 0.0;             ///< thermal noise power, W

    /// Mean fading power is pinned to one: theta = 1/k.
    double theta_user() const { return 1.0 / k_user; }
    double theta_sbs() const { return 1.0 / k_sbs; }

    void validate() const;
};

/// Deterministic quantities derived from NetworkParams.
struct DerivedModel {
    double lambda_c = 0.0;       ///< displacement-corrected CN intensity
    double lambda_s = 0.0;       ///< displacement-corrected SBS intensity
    double lambda_bar_si = 0.0;  ///< intensity of interfering in-band SBSs
    double lambda_bar_so = 0.0;  ///< intensity of interfering out-of-band SBSs
    double mean_load = 0.0;      ///< average SBSs per CN
    double i_si = 0.0;           ///< residual self-interference power, W
    double gamma_a_ibfd = 0.0;   ///< access SINR threshold, in-band
    double gamma_a_obfd = 0.0;   ///< access SINR threshold, out-of-band
};

/// Truncated PMF of the number of SBSs associated with a generic CN.
struct LoadDistribution {
    static constexpr double shape_b = 3.575;
    std::vector<double> pmf;  ///< pmf[n] = P(N_s = n), n = 0..n_max
    int n_max = 0;
    double mean_load = 0.0;
};

/// E[S^{2/beta}] for log-normal shadowing: exp(2 mu/beta + (2 sigma/beta)^2 / 2).
double lognormal_fractional_moment(double mu, double sigma, double beta);

DerivedModel derive_model(const NetworkParams& p);

/// P(N_s = n) under the gamma-approximated cell-area law, computed in log space.
double load_pmf(double mean_load, int n);

/// Truncated at the smallest n with cumulative mass >= 1 - 1e-6
/// (capped at 64 x mean_load).
LoadDistribution make_load_distribution(double mean_load);

/// min(1, s_max / n_s); n_s = 0 is a domain error.
double backhaul_access_prob(int n_s, int s_max);

/// Backhaul SIR threshold for a CN serving min(n_s, s_max) streams.
double backhaul_threshold(int n_s, const NetworkParams& p, Mode mode);

/// Intensity of hubs whose pilot reuse interferes with a given SBS.
double pilot_contamination_intensity(const DerivedModel& d, const LoadDistribution& load,
                                     int s_max);

}  // namespace fdcov
