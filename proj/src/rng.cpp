#include "sar/rng.hpp"

#include <cmath>
#include <numbers>

#include "sar/errors.hpp"

namespace sar {

double StreamRng::normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Marsaglia-Tsang; each stream rejects independently so the draw count per
// pixel varies without coupling pixels to each other.
double sample_gamma_unit_scale(double shape, StreamRng& rng) {
    if (shape < 1.0) {
        const double g = sample_gamma_unit_scale(shape + 1.0, rng);
        return g * std::pow(rng.uniform01(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double vol = t * t * t;
        const double u = rng.uniform01();
        if (std::log(u) < 0.5 * x * x + d - d * vol + d * std::log(vol)) {
            return d * vol;
        }
    }
}

// Michael-Schucany-Haas transform.
double sample_inverse_gaussian(double mu, double lambda, StreamRng& rng) {
    const double z = rng.normal();
    const double y = z * z;
    const double x = mu + mu * mu * y / (2.0 * lambda) -
                     mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    const double u = rng.uniform01();
    return (u <= mu / (mu + x)) ? x : mu * mu / x;
}

} // namespace

double sample_amplitude(DistFamily family, double p1, double p2, StreamRng& rng) {
    switch (family) {
    case DistFamily::Weibull:
        return p2 * std::pow(-std::log(rng.uniform01()), 1.0 / p1);
    case DistFamily::LogNormal:
        return std::exp(p1 + p2 * rng.normal());
    case DistFamily::InverseGaussian:
        return sample_inverse_gaussian(p1, p2, rng);
    case DistFamily::Gamma:
        return p2 * sample_gamma_unit_scale(p1, rng);
    case DistFamily::Rayleigh:
        return p1 * std::sqrt(-2.0 * std::log(rng.uniform01()));
    }
    throw ConfigError("unknown distribution family");
}

} // namespace sar
