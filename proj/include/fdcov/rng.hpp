#pragma once

#include <cmath>
#include <cstdint>

namespace fdcov {

/// splitmix64 finalizer; the basis of all seeding and per-link substreams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small deterministic generator. Draw sequences depend only on the seed,
/// never on library internals, so runs are reproducible across toolchains.
class Rand {
public:
    explicit Rand(std::uint64_t seed) : state_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (spare cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Gamma(shape k, scale theta) by Marsaglia-Tsang; k < 1 boosted via U^{1/k}.
    double gamma(double k, double theta) {
        if (k < 1.0) {
            const double u = uniform();
            return gamma(k + 1.0, theta) * std::pow(u, 1.0 / k);
        }
        const double d = k - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * theta;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * theta;
        }
    }

    /// exp(mu + sigma Z); sigma = 0 degenerates to the deterministic exp(mu).
    double lognormal(double mu, double sigma) {
        if (sigma == 0.0) return std::exp(mu);
        return std::exp(mu + sigma * normal());
    }

    /// Poisson via exponential inter-arrivals (safe for large means).
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        long n = 0;
        double acc = 0.0;
        for (;;) {
            acc += -std::log(uniform());
            if (acc >= mean) return n;
            ++n;
        }
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Order-independent substream for one link (i,j) of one draw category.
/// Lets lazily drawn channel matrices agree with eagerly drawn ones.
inline Rand link_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t i, std::uint64_t j) {
    std::uint64_t s = mix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    s = mix64(s ^ (0xd1b54a32d192ed03ULL * (i + 1)));
    s = mix64(s ^ (0x8cb92ba72f3d8dd7ULL * (j + 1)));
    return Rand(s);
}

inline Rand stream_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rand(mix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
}

}  // namespace fdcov
