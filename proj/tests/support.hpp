#pragma once

// Shared fixtures and independent statistical oracles for the test suites.
// Everything here is deliberately written from scratch (series expansions,
// textbook CDFs) so it cannot share a code path with the library.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "sar/types.hpp"

namespace testsup {

/// RADARSAT-1 style acquisition constants used across the suites.
inline sar::RadarParams table1_params() {
    sar::RadarParams p;
    p.f_c = 5.3e9;        // Hz
    p.Fr = 32.317e6;      // Hz
    p.PRF = 1256.98;      // Hz
    p.R0 = 988.65e3;      // m
    p.chirp_rate = 0.72135e12; // Hz/s
    p.T = 41.75e-6;       // s
    p.v = 7062.0;         // m/s
    p.b = 30.116e6;       // Hz
    return p;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Regularized lower incomplete gamma P(a, x) (series + continued fraction).
inline double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

/// Closed-form CDF of each candidate amplitude family.
inline double family_cdf(sar::DistFamily family, double p1, double p2, double x) {
    using sar::DistFamily;
    if (x <= 0.0) return 0.0;
    switch (family) {
    case DistFamily::Weibull:
        return 1.0 - std::exp(-std::pow(x / p2, p1));
    case DistFamily::LogNormal:
        return normal_cdf((std::log(x) - p1) / p2);
    case DistFamily::InverseGaussian: {
        const double s = std::sqrt(p2 / x);
        return normal_cdf(s * (x / p1 - 1.0)) +
               std::exp(2.0 * p2 / p1) * normal_cdf(-s * (x / p1 + 1.0));
    }
    case DistFamily::Gamma:
        return gamma_p(p1, x / p2);
    case DistFamily::Rayleigh:
        return 1.0 - std::exp(-x * x / (2.0 * p1 * p1));
    }
    return 0.0;
}

/// Two-sided Kolmogorov-Smirnov statistic against a closed-form CDF.
inline double ks_statistic(std::span<const double> samples, sar::DistFamily family, double p1,
                           double p2) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = family_cdf(family, p1, p2, sorted[i]);
        ks = std::max(ks, std::abs((i + 1.0) / n - f));
        ks = std::max(ks, std::abs(static_cast<double>(i) / n - f));
    }
    return ks;
}

/// Simple deterministic generator for test inputs (xorshift-star).
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : state_(seed * 2685821657736338717ull + 1) {}
    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 2685821657736338717ull;
    }
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace testsup
