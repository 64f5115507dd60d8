#include "sar/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace sar {

namespace {

// FFTW planning is not thread-safe; executing a cached plan on new arrays is.
// Plans are created with FFTW_UNALIGNED so they can run on any buffer.
class PlanCache {
public:
    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch_in(n), scratch_out(n);
        fftw_plan p = fftw_plan_dft_1d(n,
                                       reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                       reinterpret_cast<fftw_complex*>(scratch_out.data()),
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(std::span<std::complex<double>> x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return;
    fftw_plan p = PlanCache::instance().get(n, sign);
    // out-of-place plan: run through a scratch output then copy back
    thread_local std::vector<std::complex<double>> scratch;
    scratch.resize(n);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(x.data()),
                     reinterpret_cast<fftw_complex*>(scratch.data()));
    std::copy(scratch.begin(), scratch.end(), x.begin());
}

} // namespace

void fft_forward(std::span<std::complex<double>> x) { execute(x, FFTW_FORWARD); }

void fft_inverse(std::span<std::complex<double>> x) {
    execute(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : x) v *= scale;
}

double fft_bin_freq(int k, int n, double fs) {
    double f = static_cast<double>(k) / n * fs;
    if (f >= fs / 2.0) f -= fs;
    return f;
}

std::vector<std::complex<double>> fft_upsample(std::span<const std::complex<double>> x, int factor) {
    const int n = static_cast<int>(x.size());
    const int m = n * factor;
    std::vector<std::complex<double>> spec(x.begin(), x.end());
    fft_forward(spec);
    std::vector<std::complex<double>> padded(m, {0.0, 0.0});
    const int half = n / 2;
    for (int k = 0; k <= half; ++k) padded[k] = spec[k];
    for (int k = half + 1; k < n; ++k) padded[m - n + k] = spec[k];
    if (n % 2 == 0 && half > 0) {
        // split the Nyquist bin between its two images
        padded[half] *= 0.5;
        padded[m - half] = padded[half];
    }
    fft_inverse(padded);
    const double gain = static_cast<double>(m) / n;
    for (auto& v : padded) v *= gain;
    return padded;
}

} // namespace sar
