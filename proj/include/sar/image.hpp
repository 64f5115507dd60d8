#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sar {

/// Which axis the azimuth dimension currently represents.
enum class Domain : std::uint8_t {
    SlowTime = 0, ///< rows are slow-time pulses
    Doppler = 1,  ///< rows are azimuth-frequency bins (after an azimuth FFT)
};

/// 2D complex raster. Rows are azimuth (slow time), columns are range
/// (fast time); data is row-major so one range line is contiguous.
struct ComplexImage {
    int n_az = 0;
    int n_rg = 0;
    double t0 = 0.0;   ///< fast-time of column 0 [s]
    double dt = 0.0;   ///< fast-time step, 1/Fr [s]
    double eta0 = 0.0; ///< slow-time of row 0 [s]
    double deta = 0.0; ///< slow-time step, 1/PRF [s]
    Domain domain = Domain::SlowTime;
    std::vector<std::complex<double>> data;

    ComplexImage() = default;
    ComplexImage(int az, int rg)
        : n_az(az), n_rg(rg), data(static_cast<std::size_t>(az) * rg) {}

    std::complex<double>& at(int r, int c) {
        return data[static_cast<std::size_t>(r) * n_rg + c];
    }
    const std::complex<double>& at(int r, int c) const {
        return data[static_cast<std::size_t>(r) * n_rg + c];
    }
    std::span<std::complex<double>> row(int r) {
        return {data.data() + static_cast<std::size_t>(r) * n_rg, static_cast<std::size_t>(n_rg)};
    }
    std::span<const std::complex<double>> row(int r) const {
        return {data.data() + static_cast<std::size_t>(r) * n_rg, static_cast<std::size_t>(n_rg)};
    }

    double fast_time(int col) const { return t0 + col * dt; }
    double slow_time(int row) const { return eta0 + row * deta; }

    /// Throws sar::ConfigError on dimension/metadata inconsistencies.
    void validate() const;
};

/// Nonnegative real raster with the same row-major azimuth x range layout.
struct MagnitudeImage {
    int n_az = 0;
    int n_rg = 0;
    std::vector<double> data;

    MagnitudeImage() = default;
    MagnitudeImage(int az, int rg)
        : n_az(az), n_rg(rg), data(static_cast<std::size_t>(az) * rg, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * n_rg + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * n_rg + c]; }

    void validate() const;
};

/// Pixel-wise |z| of a complex image.
MagnitudeImage magnitude(const ComplexImage& img);

} // namespace sar
