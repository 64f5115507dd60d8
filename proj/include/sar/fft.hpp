#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sar {

/// In-place forward DFT (unnormalized), length = x.size().
/// Plans are cached per length; safe to call from multiple threads.
void fft_forward(std::span<std::complex<double>> x);

/// In-place inverse DFT, scaled by 1/N.
void fft_inverse(std::span<std::complex<double>> x);

/// DFT bin frequency for sample rate fs: k/N*fs mapped to [-fs/2, fs/2).
double fft_bin_freq(int k, int n, double fs);

/// Zero-pad the spectrum of `x` to `factor*x.size()` samples and return the
/// upsampled time series (amplitude-preserving). Used for sub-sample peak
/// and width measurements.
std::vector<std::complex<double>> fft_upsample(std::span<const std::complex<double>> x, int factor);

} // namespace sar
