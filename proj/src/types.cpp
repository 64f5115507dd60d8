#include "sar/types.hpp"

#include <cmath>
#include <string>

#include "sar/errors.hpp"

namespace sar {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string("radar parameter '") + name + "' must be strictly positive");
    }
}

} // namespace

void RadarParams::validate() const {
    require_positive(f_c, "f_c");
    require_positive(Fr, "Fr");
    require_positive(PRF, "PRF");
    require_positive(R0, "R0");
    require_positive(chirp_rate, "chirp_rate");
    require_positive(T, "T");
    require_positive(v, "v");
    require_positive(b, "b");
    if (t0 < 0.0 || !std::isfinite(t0)) {
        throw ConfigError("radar parameter 't0' must be nonnegative");
    }
    // Published parameter tables round each entry independently, so
    // chirp_rate*T and b only agree to ~1e-5; anything worse is a typo.
    const double rel = std::abs(chirp_rate * T - b) / b;
    if (rel > 1e-4) {
        throw ConfigError("chirp_rate * T disagrees with bandwidth b (relative error " +
                          std::to_string(rel) + ")");
    }
}

const char* family_name(DistFamily f) {
    switch (f) {
    case DistFamily::Weibull: return "weibull";
    case DistFamily::LogNormal: return "lognormal";
    case DistFamily::InverseGaussian: return "invgauss";
    case DistFamily::Gamma: return "gamma";
    case DistFamily::Rayleigh: return "rayleigh";
    }
    return "unknown";
}

void ClutterSpec::validate() const {
    const bool p1_ok = std::isfinite(p1) && p1 > 0.0;
    const bool p2_ok = std::isfinite(p2) && p2 > 0.0;
    switch (family) {
    case DistFamily::Weibull:
    case DistFamily::InverseGaussian:
    case DistFamily::Gamma:
        if (!p1_ok || !p2_ok) throw ConfigError("clutter parameters must be strictly positive");
        break;
    case DistFamily::LogNormal:
        // location of log may be any finite real; scale must be positive
        if (!std::isfinite(p1) || !p2_ok) {
            throw ConfigError("lognormal clutter needs finite p1 and positive p2");
        }
        break;
    case DistFamily::Rayleigh:
        if (!p1_ok) throw ConfigError("rayleigh clutter needs positive sigma");
        break;
    }
}

} // namespace sar
