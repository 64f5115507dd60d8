#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace sar {

/// Propagation speed used everywhere, m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Acquisition constants of a strip-map chirp radar.
/// All units SI: Hz, s, m.
struct RadarParams {
    double f_c = 0.0;        ///< carrier frequency [Hz]
    double Fr = 0.0;         ///< range (fast-time) sampling rate [Hz]
    double PRF = 0.0;        ///< pulse repetition frequency [Hz]
    double R0 = 0.0;         ///< slant range of the first range sample [m]
    double chirp_rate = 0.0; ///< chirp FM rate b/T [Hz/s]
    double T = 0.0;          ///< chirp duration [s]
    double v = 0.0;          ///< platform speed [m/s]
    double b = 0.0;          ///< chirp bandwidth [Hz]
    double t0 = 0.0;         ///< fast-time of the first range sample [s]; 0 = derive as 2*R0/c

    double wavelength() const { return kSpeedOfLight / f_c; }
    /// Fast-time of the first sample (explicit t0, or 2*R0/c when unset).
    double fast_time_origin() const { return t0 > 0.0 ? t0 : 2.0 * R0 / kSpeedOfLight; }
    /// Number of fast-time samples spanned by one chirp.
    int chirp_samples() const { return static_cast<int>(std::floor(T * Fr)); }

    /// Throws sar::ConfigError when a field is nonpositive or chirp_rate*T
    /// disagrees with b beyond published-parameter rounding (1e-4 relative).
    void validate() const;
};

/// One point scatterer in the simulated scene.
struct SceneTarget {
    std::complex<double> sigma; ///< complex radar cross section (amplitude + phase)
    double R0_t = 0.0;          ///< closest-approach slant range [m]
    double eta_c = 0.0;         ///< beam-center crossing slow-time [s]
};

enum class DistFamily : std::uint8_t {
    Weibull = 0,
    LogNormal = 1,
    InverseGaussian = 2,
    Gamma = 3,
    Rayleigh = 4,
};

const char* family_name(DistFamily f);

/// Synthetic sea-surface description: per-pixel amplitude distribution,
/// phase uniform on [0, 2pi).
struct ClutterSpec {
    DistFamily family = DistFamily::Weibull;
    double p1 = 0.0; ///< first family parameter (shape / log-location / mean / shape / sigma)
    double p2 = 0.0; ///< second family parameter; unused for Rayleigh

    /// Throws sar::ConfigError on parameters outside the family's domain.
    void validate() const;
};

} // namespace sar
