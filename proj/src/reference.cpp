#include "sar/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sar/errors.hpp"
#include "sar/sim.hpp"

namespace sar::ref {

MagnitudeImage median_filter(const MagnitudeImage& img, int m, int n) {
    img.validate();
    if (m < 1 || n < 1) throw std::invalid_argument("median window extents must be >= 1");
    if (m > img.n_az || n > img.n_rg) {
        throw std::invalid_argument("median window larger than the image");
    }
    const int up = (m - 1) / 2, down = m / 2;
    const int left = (n - 1) / 2, right = n / 2;

    MagnitudeImage out(img.n_az, img.n_rg);
    std::vector<double> window;
    for (int r = 0; r < img.n_az; ++r) {
        for (int c = 0; c < img.n_rg; ++c) {
            window.clear();
            for (int i = std::max(0, r - up); i <= std::min(img.n_az - 1, r + down); ++i) {
                for (int j = std::max(0, c - left); j <= std::min(img.n_rg - 1, c + right); ++j) {
                    window.push_back(img.at(i, j));
                }
            }
            std::sort(window.begin(), window.end());
            out.at(r, c) = window[(window.size() - 1) / 2];
        }
    }
    return out;
}

DetectionMap cfar_scan(const MagnitudeImage& img, const CfarConfig& cfg) {
    img.validate();
    cfg.validate();
    const int half_az = cfg.guard_az + cfg.train_az;
    const int half_rg = cfg.guard_rg + cfg.train_rg;
    const int center_r = img.n_az / 2;
    const int center_c = img.n_rg / 2;
    if (center_r - half_az < 0 || center_r + half_az > img.n_az - 1 ||
        center_c - half_rg < 0 || center_c + half_rg > img.n_rg - 1) {
        throw ConfigError("cfar window does not fit inside the image");
    }
    const double q = cfg.q_override ? *cfg.q_override : design_q(cfg.model, cfg.p_fa);

    DetectionMap map;
    map.n_az = img.n_az;
    map.n_rg = img.n_rg;
    map.mask.assign(img.data.size(), 0);
    map.config = cfg;

    for (int r = 0; r < img.n_az; ++r) {
        for (int c = 0; c < img.n_rg; ++c) {
            double s = 0.0, s2 = 0.0;
            long count = 0;
            for (int i = std::max(0, r - half_az); i <= std::min(img.n_az - 1, r + half_az); ++i) {
                for (int j = std::max(0, c - half_rg); j <= std::min(img.n_rg - 1, c + half_rg);
                     ++j) {
                    if (std::abs(i - r) <= cfg.guard_az && std::abs(j - c) <= cfg.guard_rg) {
                        continue;
                    }
                    const double x = img.at(i, j);
                    s += x;
                    s2 += x * x;
                    ++count;
                }
            }
            const double mu = s / count;
            double sigma = 0.0;
            if (count > 1) {
                sigma = std::sqrt(std::max(0.0, (s2 - s * s / count) / (count - 1.0)));
            }
            const double threshold = mu + sigma * q;
            if (img.at(r, c) > threshold) {
                map.mask[static_cast<std::size_t>(r) * img.n_rg + c] = 1;
                map.detections.push_back({r, c, img.at(r, c), threshold});
            }
        }
    }
    return map;
}

ComplexImage range_compress(const ComplexImage& raw, const RadarParams& params) {
    raw.validate();
    params.validate();
    const std::vector<std::complex<double>> h = ideal_chirp_replica(params, raw.n_rg);
    const int n = raw.n_rg;

    ComplexImage out = raw;
    for (int r = 0; r < raw.n_az; ++r) {
        const auto src = raw.row(r);
        auto dst = out.row(r);
        for (int j = 0; j < n; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (int mth = 0; mth < n; ++mth) {
                if (h[mth] == std::complex<double>(0.0, 0.0)) continue;
                acc += src[(j + mth) % n] * std::conj(h[mth]);
            }
            dst[j] = acc;
        }
    }
    return out;
}

} // namespace sar::ref
