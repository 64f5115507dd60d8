#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sar/image.hpp"
#include "sar/types.hpp"

namespace sar {

/// Doppler-centroid estimate: coarse value from the trajectory slope,
/// fractional part from the azimuth spectrum, and their combination.
struct DopplerEstimate {
    double f_dc_coarse = 0.0;    ///< slope-method estimate [Hz]
    double f_dc_frac = 0.0;      ///< spectrum estimate in [-PRF/2, PRF/2) [Hz]
    int ambiguity_index = 0;     ///< M such that f_dc = f_dc_frac + M * PRF
    double f_dc = 0.0;           ///< unambiguous centroid [Hz]
    double slope = 0.0;          ///< trajectory slope [range samples / azimuth sample]
    double radial_velocity = 0.0; ///< dR/deta at beam center [m/s]
};

/// Spectral weighting applied by the matched filters.
enum class Window : std::uint8_t { None = 0, Hamming = 1 };

struct FocusOptions {
    Window window = Window::None;
    int rcmc_taps = 8;          ///< truncated-sinc interpolator length (even, >= 4)
    double kaiser_beta = 2.5;   ///< interpolator window parameter
};

/// Focus quality summary emitted as a key=value block.
struct FocusReport {
    int peak_row = 0;
    int peak_col = 0;
    double peak_magnitude = 0.0;
    double range_width_3db = 0.0; ///< -3 dB impulse-response width [range samples]
    double az_width_3db = 0.0;    ///< -3 dB impulse-response width [azimuth samples]
    std::vector<std::pair<std::string, double>> stage_ms; ///< per-stage wall clock

    std::string to_text() const;
};

/// Matched-filters every range line against the transmitted-chirp replica
/// (frequency-domain multiply by the conjugate replica spectrum). A point
/// target collapses to a sinc centered at fast-time 2R/c.
ComplexImage range_compress(const ComplexImage& raw, const RadarParams& params,
                            const FocusOptions& opts = {});

/// Least-squares slope of the brightest trajectory in a range-compressed
/// image: per azimuth line the sub-bin-refined peak position is taken, lines
/// above the magnitude quantile form candidate trajectories, and the longest
/// contiguous run is fit. Throws sar::EstimationError when no coherent
/// trajectory exists (fit residual above 10 range bins, or too few lines).
double estimate_slope(const ComplexImage& rc, double threshold_quantile);

struct SlopeDoppler {
    double radial_velocity = 0.0; ///< m/s
    double f_dc_coarse = 0.0;     ///< Hz
};

/// Converts a trajectory slope to radial velocity (slope * c/(2 Fr) * PRF)
/// and a coarse Doppler centroid (-2/lambda * dR/deta).
SlopeDoppler slope_to_fdc(double slope, const RadarParams& params);

/// Fractional Doppler centroid from the azimuth power spectrum averaged
/// over the n_lines most energetic range columns; the spectral peak is
/// refined with a five-point parabola and mapped to [-PRF/2, PRF/2).
/// Throws sar::EstimationError when the spectrum is flat (peak/mean < 1.5).
double estimate_fractional_fdc(const ComplexImage& rc, const RadarParams& params, int n_lines);

/// Combines coarse and fractional estimates: M = round((coarse - frac)/PRF),
/// f_dc = frac + M * PRF. Slope fields are left at zero.
DopplerEstimate resolve_ambiguity(double f_dc_coarse, double f_dc_frac, double prf);

/// Full estimation chain (slope -> coarse, spectrum -> fractional, resolve).
DopplerEstimate estimate_doppler(const ComplexImage& rc, const RadarParams& params,
                                 double threshold_quantile, int n_lines);

/// Range cell migration correction: azimuth-FFTs each range column, then
/// shifts every Doppler row in range by delta_R(f) = lambda^2 R0 f^2/(8 v^2)
/// (f is the unambiguous azimuth frequency, reconstructed bin by bin around
/// the fractional centroid) with a truncated Kaiser-windowed sinc. Energy of
/// a point target lands at the constant range 2 R0/c. Output stays in the
/// range-Doppler domain.
ComplexImage rcmc(const ComplexImage& rc, const RadarParams& params, const DopplerEstimate& dop,
                  const FocusOptions& opts = {});

/// Azimuth compression in the range-Doppler domain: each range column is
/// multiplied by the quadratic matched-filter phase exp(-j pi (f-f_dc)^2/Ka)
/// with the per-column, squint-corrected azimuth FM rate, then inverse-FFTd
/// back to slow time. Rejects input that is not in the Doppler domain.
ComplexImage azimuth_compress(const ComplexImage& rd, const RadarParams& params,
                              const DopplerEstimate& dop, const FocusOptions& opts = {});

/// Locates the brightest target and measures its -3 dB widths on
/// FFT-upsampled cuts. The azimuth cut is shifted to baseband with
/// dop.f_dc_frac before upsampling.
FocusReport measure_focus(const ComplexImage& focused, const RadarParams& params,
                          const DopplerEstimate& dop);

} // namespace sar
