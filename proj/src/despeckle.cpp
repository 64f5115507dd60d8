#include "sar/despeckle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace sar {

MagnitudeImage median_filter(const MagnitudeImage& img, int m, int n) {
    img.validate();
    if (m < 1 || n < 1) throw std::invalid_argument("median window extents must be >= 1");
    if (m > img.n_az || n > img.n_rg) {
        throw std::invalid_argument("median window larger than the image");
    }

    // An m-long window anchors floor((m-1)/2) cells before the pixel and
    // floor(m/2) after it; even windows lean one cell forward.
    const int up = (m - 1) / 2, down = m / 2;
    const int left = (n - 1) / 2, right = n / 2;

    MagnitudeImage out(img.n_az, img.n_rg);

#pragma omp parallel
    {
        std::vector<double> window;
        window.reserve(static_cast<std::size_t>(m) * n);
#pragma omp for schedule(static)
        for (int r = 0; r < img.n_az; ++r) {
            const int r0 = std::max(0, r - up);
            const int r1 = std::min(img.n_az - 1, r + down);
            for (int c = 0; c < img.n_rg; ++c) {
                const int c0 = std::max(0, c - left);
                const int c1 = std::min(img.n_rg - 1, c + right);
                window.clear();
                for (int i = r0; i <= r1; ++i) {
                    for (int j = c0; j <= c1; ++j) window.push_back(img.at(i, j));
                }
                // lower median: order statistic floor((k-1)/2), zero-based
                const auto k = window.size();
                auto mid = window.begin() + static_cast<std::ptrdiff_t>((k - 1) / 2);
                std::nth_element(window.begin(), mid, window.end());
                out.at(r, c) = *mid;
            }
        }
    }
    return out;
}

} // namespace sar
