#pragma once

#include <optional>
#include <vector>

#include "sar/image.hpp"
#include "sar/stats.hpp"

namespace sar {

/// Sliding-window detector configuration. Guard and training extents are
/// per-wing cell counts: the guard region spans +-guard cells around the
/// cell under test, the training band adds another train cells beyond it.
struct CfarConfig {
    int guard_az = 0;
    int guard_rg = 0;
    int train_az = 0;
    int train_rg = 0;
    double p_fa = 1e-6;
    FittedModel model;               ///< global clutter model driving Q
    std::optional<double> q_override; ///< manual detector design parameter

    /// Throws sar::ConfigError on nonsensical extents or p_fa outside (0,1).
    void validate() const;
};

struct Detection {
    int row = 0;
    int col = 0;
    double amplitude = 0.0;
    double threshold = 0.0;
};

/// Detector output: a boolean mask aligned with the scanned image plus the
/// per-detection records, in row-major order.
struct DetectionMap {
    int n_az = 0;
    int n_rg = 0;
    std::vector<std::uint8_t> mask;
    std::vector<Detection> detections;
    CfarConfig config;

    bool at(int r, int c) const { return mask[static_cast<std::size_t>(r) * n_rg + c] != 0; }
};

/// Adaptive threshold of a Weibull background at the requested false-alarm
/// probability: beta * ln(1/p_fa)^(1/alpha).
double weibull_threshold(double alpha, double beta, double p_fa);

/// Detector design parameter Q = T_aW / mean of the fitted model.
/// Only the Weibull family carries the closed-form threshold; other
/// families are rejected.
double design_q(const FittedModel& model, double p_fa);

/// Eq.-style cell decision: target iff x_cut > mu_c + sigma_c * q.
bool cell_decision(double x_cut, double mu_c, double sigma_c, double q);

/// 2D CFAR scan: per pixel, mu_c/sigma_c are the sample mean and unbiased
/// standard deviation of the training ring (rectangle between guard and
/// outer extents, clipped at the image border), and the pixel is declared a
/// target when it exceeds mu_c + sigma_c * Q. Deterministic regardless of
/// thread count.
DetectionMap cfar_scan(const MagnitudeImage& img, const CfarConfig& cfg);

} // namespace sar
