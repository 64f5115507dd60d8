#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sar/image.hpp"
#include "sar/types.hpp"

namespace sar {

/// Knobs of the echo simulator that are not acquisition constants.
struct SimulationOptions {
    /// Fraction of the PRF occupied by the azimuth signal bandwidth; sets the
    /// synthetic aperture length so the sampled phase history is unaliased.
    double az_bandwidth_fraction = 0.8;
    /// Doppler centroid to imprint on the scene [Hz]. Nonzero values offset
    /// each target's closest approach from its beam-center time, the same way
    /// a squinted antenna does. 0 keeps closest approach at eta_c.
    double injected_fdc = 0.0;
    /// Slow-time of row 0 [s]; unset = center the grid on eta = 0.
    std::optional<double> eta0;
};

/// Slow-time offset (beam center minus closest approach) that realizes the
/// requested Doppler centroid for a target at range R0_t.
double squint_time_offset(const RadarParams& params, double injected_fdc, double R0_t);

/// Synthetic aperture duration [s] for a target at range R0_t.
double aperture_time(const RadarParams& params, double az_bandwidth_fraction, double R0_t);

/// Raw echo of the scene: the superposition of every target's received chirp
/// on the (slow-time x fast-time) sample grid, plus optional per-pixel
/// complex clutter. Deterministic for a fixed seed, independent of threading.
///
/// Throws std::invalid_argument when a target's echo support leaves the
/// simulated fast-time window or the clutter parameters are invalid.
ComplexImage simulate_echo(const RadarParams& params,
                           std::span<const SceneTarget> targets,
                           const std::optional<ClutterSpec>& clutter,
                           int n_az, int n_rg, std::uint64_t seed,
                           const SimulationOptions& opts = {});

/// Transmitted-chirp replica exp(j*pi*chirp_rate*t^2) sampled at Fr over
/// t in [-T/2, T/2), zero-padded to n and stored in wrapped (circulant)
/// layout: t=0 at index 0, negative times at the end of the vector. This is
/// the layout the frequency-domain matched filter consumes directly.
std::vector<std::complex<double>> ideal_chirp_replica(const RadarParams& params, int n);

/// Per-pixel clutter amplitudes (no targets, no phase): the post-focusing
/// injection path for detector tests with exactly known statistics.
MagnitudeImage clutter_amplitude_field(const ClutterSpec& clutter, int n_az, int n_rg,
                                       std::uint64_t seed);

/// Per-pixel complex clutter field (family-distributed amplitude, uniform phase).
ComplexImage clutter_complex_field(const ClutterSpec& clutter, int n_az, int n_rg,
                                   std::uint64_t seed);

} // namespace sar
