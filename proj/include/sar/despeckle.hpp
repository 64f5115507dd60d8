#pragma once

#include "sar/image.hpp"

namespace sar {

/// Sliding-window median filter: each output pixel is the lower median of
/// its m x n neighborhood (m rows = azimuth, n cols = range), which is the
/// minimizer of the window's summed absolute deviation. Windows shrink at
/// the image border instead of padding. Throws std::invalid_argument when
/// m or n is zero or exceeds the image.
MagnitudeImage median_filter(const MagnitudeImage& img, int m, int n);

} // namespace sar
