#pragma once

#include "sar/cfar.hpp"
#include "sar/despeckle.hpp"
#include "sar/focus.hpp"
#include "sar/image.hpp"
#include "sar/types.hpp"

namespace sar::ref {

/// Serial reference implementations of the hot kernels, written as the
/// plainest possible loops. They exist to pin down the optimized OpenMP
/// kernels in tests and benchmarks, not for production use.

/// Full-sort median over explicitly gathered windows.
MagnitudeImage median_filter(const MagnitudeImage& img, int m, int n);

/// Per-pixel training-ring statistics recomputed from scratch.
DetectionMap cfar_scan(const MagnitudeImage& img, const CfarConfig& cfg);

/// Time-domain circular correlation against the chirp replica.
ComplexImage range_compress(const ComplexImage& raw, const RadarParams& params);

} // namespace sar::ref
