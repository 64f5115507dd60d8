#include "sar/image.hpp"

#include <cmath>

#include "sar/errors.hpp"

namespace sar {

void ComplexImage::validate() const {
    if (n_az < 1 || n_rg < 1) throw ConfigError("image dimensions must be >= 1");
    if (data.size() != static_cast<std::size_t>(n_az) * n_rg) {
        throw ConfigError("image payload length does not match dimensions");
    }
    if (!(dt > 0.0) || !(deta > 0.0)) throw ConfigError("image axis steps must be positive");
}

void MagnitudeImage::validate() const {
    if (n_az < 1 || n_rg < 1) throw ConfigError("image dimensions must be >= 1");
    if (data.size() != static_cast<std::size_t>(n_az) * n_rg) {
        throw ConfigError("image payload length does not match dimensions");
    }
    for (double x : data) {
        if (x < 0.0 || !std::isfinite(x)) throw ConfigError("magnitude pixels must be finite and >= 0");
    }
}

MagnitudeImage magnitude(const ComplexImage& img) {
    MagnitudeImage out(img.n_az, img.n_rg);
    const std::size_t n = img.data.size();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        out.data[i] = std::abs(img.data[i]);
    }
    return out;
}

} // namespace sar
