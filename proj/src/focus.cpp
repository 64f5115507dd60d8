#include "sar/focus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sar/errors.hpp"
#include "sar/fft.hpp"
#include "sar/sim.hpp"
#include "sar/stats.hpp"

namespace sar {

namespace {

constexpr double kPi = std::numbers::pi;

void check_axis(const ComplexImage& img, const RadarParams& params) {
    const double dt = 1.0 / params.Fr;
    if (std::abs(img.dt - dt) > 1e-9 * dt) {
        throw std::invalid_argument("image fast-time step disagrees with Fr");
    }
    const double t0 = params.fast_time_origin();
    if (std::abs(img.t0 - t0) > 1e-9 * t0) {
        throw std::invalid_argument("image fast-time origin disagrees with t0");
    }
}

double wrap_half(double f, double fs) {
    while (f < -fs / 2.0) f += fs;
    while (f >= fs / 2.0) f -= fs;
    return f;
}

std::vector<double> spectral_window(Window window, int n, double fs) {
    std::vector<double> w(n, 1.0);
    if (window == Window::Hamming) {
        for (int k = 0; k < n; ++k) {
            w[k] = 0.54 + 0.46 * std::cos(2.0 * kPi * fft_bin_freq(k, n, fs) / fs);
        }
    }
    return w;
}

double bessel_i0(double x) {
    // power series; converges quickly for the small arguments used here
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (k * k);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

double kaiser_sinc(double u, double half_width, double beta) {
    const double r = u / half_width;
    if (std::abs(r) >= 1.0) return 0.0;
    const double window = bessel_i0(beta * std::sqrt(1.0 - r * r)) / bessel_i0(beta);
    if (u == 0.0) return window;
    return window * std::sin(kPi * u) / (kPi * u);
}

// Sub-bin peak position of one range line. A parabola on three samples of a
// near-critically-sampled sinc biases the position toward bin centers, which
// wrecks slope fits when the whole migration is below one bin; upsampling a
// window around the peak avoids that.
double refined_peak_position(std::span<const std::complex<double>> line) {
    int k = 0;
    double best = -1.0;
    for (int i = 0; i < static_cast<int>(line.size()); ++i) {
        const double m = std::norm(line[i]);
        if (m > best) {
            best = m;
            k = i;
        }
    }
    constexpr int kHalf = 32;
    constexpr int kFactor = 32;
    const int n = static_cast<int>(line.size());
    if (n < 2 * kHalf) return static_cast<double>(k);
    int lo = std::clamp(k - kHalf, 0, n - 2 * kHalf);
    std::vector<std::complex<double>> window(line.begin() + lo, line.begin() + lo + 2 * kHalf);
    const auto up = fft_upsample(window, kFactor);
    int peak = 0;
    for (int i = 1; i < static_cast<int>(up.size()); ++i) {
        if (std::abs(up[i]) > std::abs(up[peak])) peak = i;
    }
    return lo + static_cast<double>(peak) / kFactor;
}

} // namespace

std::string FocusReport::to_text() const {
    std::ostringstream os;
    os.precision(12);
    os << "peak_row = " << peak_row << "\n";
    os << "peak_col = " << peak_col << "\n";
    os << "peak_magnitude = " << peak_magnitude << "\n";
    os << "range_width_3db = " << range_width_3db << "\n";
    os << "az_width_3db = " << az_width_3db << "\n";
    for (const auto& [name, ms] : stage_ms) {
        os << "ms_" << name << " = " << ms << "\n";
    }
    return os.str();
}

ComplexImage range_compress(const ComplexImage& raw, const RadarParams& params,
                            const FocusOptions& opts) {
    raw.validate();
    params.validate();
    check_axis(raw, params);
    if (raw.domain != Domain::SlowTime) {
        throw std::invalid_argument("range compression expects slow-time rows");
    }

    std::vector<std::complex<double>> replica = ideal_chirp_replica(params, raw.n_rg);
    fft_forward(replica);
    const std::vector<double> w = spectral_window(opts.window, raw.n_rg, params.Fr);
    for (int k = 0; k < raw.n_rg; ++k) replica[k] = std::conj(replica[k]) * w[k];

    ComplexImage out = raw;
#pragma omp parallel for schedule(static)
    for (int r = 0; r < out.n_az; ++r) {
        auto line = out.row(r);
        fft_forward(line);
        for (int k = 0; k < out.n_rg; ++k) line[k] *= replica[k];
        fft_inverse(line);
    }
    return out;
}

double estimate_slope(const ComplexImage& rc, double threshold_quantile) {
    rc.validate();
    if (rc.domain != Domain::SlowTime) {
        throw std::invalid_argument("slope estimation expects slow-time rows");
    }
    if (!(threshold_quantile > 0.0) || !(threshold_quantile < 1.0)) {
        throw std::invalid_argument("threshold quantile must lie in (0, 1)");
    }

    std::vector<double> mags(rc.data.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(rc.data.size()); ++i) {
        mags[i] = std::abs(rc.data[i]);
    }
    const double tau = quantile(mags, threshold_quantile);

    std::vector<char> candidate(rc.n_az, 0);
    std::vector<double> position(rc.n_az, 0.0);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rc.n_az; ++r) {
        const auto line = rc.row(r);
        double best = 0.0;
        for (const auto& v : line) best = std::max(best, std::abs(v));
        if (best > tau && best > 0.0) {
            candidate[r] = 1;
            position[r] = refined_peak_position(line);
        }
    }

    // longest contiguous run of candidate lines = one isolated trajectory
    int best_start = -1, best_len = 0, run_start = -1;
    for (int r = 0; r <= rc.n_az; ++r) {
        if (r < rc.n_az && candidate[r]) {
            if (run_start < 0) run_start = r;
        } else if (run_start >= 0) {
            if (r - run_start > best_len) {
                best_len = r - run_start;
                best_start = run_start;
            }
            run_start = -1;
        }
    }
    if (best_len < 8) {
        throw EstimationError("no bright trajectory above the magnitude threshold");
    }

    // Theil-Sen first: stray clutter lines at the run edges would drag a
    // plain least-squares fit, the median of pairwise slopes shrugs them off.
    std::vector<double> pair_slopes;
    pair_slopes.reserve(static_cast<std::size_t>(best_len) * (best_len - 1) / 2);
    const int stride = best_len > 1500 ? best_len / 1500 + 1 : 1;
    for (int i = 0; i < best_len; i += stride) {
        for (int j = i + 1; j < best_len; j += stride) {
            pair_slopes.push_back((position[best_start + j] - position[best_start + i]) /
                                  static_cast<double>(j - i));
        }
    }
    std::nth_element(pair_slopes.begin(), pair_slopes.begin() + pair_slopes.size() / 2,
                     pair_slopes.end());
    const double ts_slope = pair_slopes[pair_slopes.size() / 2];
    std::vector<double> offsets;
    offsets.reserve(best_len);
    for (int r = best_start; r < best_start + best_len; ++r) {
        offsets.push_back(position[r] - ts_slope * r);
    }
    std::nth_element(offsets.begin(), offsets.begin() + offsets.size() / 2, offsets.end());
    const double ts_intercept = offsets[offsets.size() / 2];

    // least-squares polish on the inliers of the robust fit
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int kept = 0;
    for (int r = best_start; r < best_start + best_len; ++r) {
        if (std::abs(position[r] - (ts_intercept + ts_slope * r)) > 5.0) continue;
        sx += r;
        sy += position[r];
        sxx += static_cast<double>(r) * r;
        sxy += r * position[r];
        ++kept;
    }
    if (kept < 8 || kept < best_len / 2) {
        throw EstimationError("bright pixels do not form a coherent trajectory");
    }
    const double denom = kept * sxx - sx * sx;
    const double slope = (kept * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / kept;

    double rss = 0.0;
    for (int r = best_start; r < best_start + best_len; ++r) {
        if (std::abs(position[r] - (ts_intercept + ts_slope * r)) > 5.0) continue;
        const double e = position[r] - (intercept + slope * r);
        rss += e * e;
    }
    if (std::sqrt(rss / kept) > 5.0) {
        throw EstimationError("bright pixels do not form a coherent trajectory");
    }
    return slope;
}

SlopeDoppler slope_to_fdc(double slope, const RadarParams& params) {
    params.validate();
    SlopeDoppler out;
    out.radial_velocity = slope * kSpeedOfLight / (2.0 * params.Fr) * params.PRF;
    out.f_dc_coarse = -2.0 / params.wavelength() * out.radial_velocity;
    return out;
}

double estimate_fractional_fdc(const ComplexImage& rc, const RadarParams& params, int n_lines) {
    rc.validate();
    params.validate();
    if (rc.n_az < 8) throw std::invalid_argument("need at least 8 azimuth samples");
    if (n_lines < 1 || n_lines > rc.n_rg) {
        throw std::invalid_argument("n_lines must lie in [1, n_rg]");
    }

    // rank columns by energy; the most energetic ones carry the signal on
    // sparse synthetic scenes and are statistically equivalent to any subset
    // on homogeneous ones
    std::vector<double> energy(rc.n_rg, 0.0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < rc.n_rg; ++c) {
        double acc = 0.0;
        for (int r = 0; r < rc.n_az; ++r) acc += std::norm(rc.at(r, c));
        energy[c] = acc;
    }
    std::vector<int> order(rc.n_rg);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return energy[a] > energy[b]; });
    order.resize(n_lines);

    std::vector<std::vector<double>> spectra(n_lines);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_lines; ++i) {
        std::vector<std::complex<double>> col(rc.n_az);
        for (int r = 0; r < rc.n_az; ++r) col[r] = rc.at(r, order[i]);
        fft_forward(col);
        spectra[i].resize(rc.n_az);
        for (int k = 0; k < rc.n_az; ++k) spectra[i][k] = std::norm(col[k]);
    }
    std::vector<double> power(rc.n_az, 0.0);
    for (int i = 0; i < n_lines; ++i) {
        for (int k = 0; k < rc.n_az; ++k) power[k] += spectra[i][k];
    }

    double mean = 0.0, peak = 0.0;
    int k_peak = 0;
    for (int k = 0; k < rc.n_az; ++k) {
        mean += power[k];
        if (power[k] > peak) {
            peak = power[k];
            k_peak = k;
        }
    }
    mean /= rc.n_az;
    if (!(mean > 0.0) || peak / mean < 1.5) {
        throw EstimationError("azimuth spectrum is flat; no Doppler centroid visible");
    }

    // five-point parabola around the circular peak
    double sy = 0.0, sxy = 0.0, sxxy = 0.0;
    for (int d = -2; d <= 2; ++d) {
        const double y = power[(k_peak + d + rc.n_az) % rc.n_az];
        sy += y;
        sxy += d * y;
        sxxy += static_cast<double>(d) * d * y;
    }
    const double c1 = sxy / 10.0;
    const double c2 = (sxxy - 2.0 * sy) / 14.0;
    double offset = (c2 < 0.0) ? -c1 / (2.0 * c2) : 0.0;
    offset = std::clamp(offset, -2.5, 2.5);

    const double bin = params.PRF / rc.n_az;
    return wrap_half((k_peak + offset) * bin, params.PRF);
}

DopplerEstimate resolve_ambiguity(double f_dc_coarse, double f_dc_frac, double prf) {
    if (!(prf > 0.0)) throw std::invalid_argument("PRF must be positive");
    DopplerEstimate dop;
    dop.f_dc_coarse = f_dc_coarse;
    dop.f_dc_frac = f_dc_frac;
    dop.ambiguity_index = static_cast<int>(std::llround((f_dc_coarse - f_dc_frac) / prf));
    dop.f_dc = f_dc_frac + dop.ambiguity_index * prf;
    return dop;
}

DopplerEstimate estimate_doppler(const ComplexImage& rc, const RadarParams& params,
                                 double threshold_quantile, int n_lines) {
    const double slope = estimate_slope(rc, threshold_quantile);
    const SlopeDoppler coarse = slope_to_fdc(slope, params);
    const double frac = estimate_fractional_fdc(rc, params, n_lines);
    DopplerEstimate dop = resolve_ambiguity(coarse.f_dc_coarse, frac, params.PRF);
    dop.slope = slope;
    dop.radial_velocity = coarse.radial_velocity;
    return dop;
}

ComplexImage rcmc(const ComplexImage& rc, const RadarParams& params, const DopplerEstimate& dop,
                  const FocusOptions& opts) {
    rc.validate();
    params.validate();
    check_axis(rc, params);
    if (rc.domain != Domain::SlowTime) {
        throw std::invalid_argument("rcmc expects slow-time rows");
    }
    if (!std::isfinite(dop.f_dc) || !std::isfinite(dop.f_dc_frac)) {
        throw std::invalid_argument("rcmc needs a finite Doppler estimate");
    }
    if (opts.rcmc_taps < 4 || opts.rcmc_taps % 2 != 0) {
        throw std::invalid_argument("interpolator length must be even and >= 4");
    }

    ComplexImage rd = rc;
    rd.domain = Domain::Doppler;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < rd.n_rg; ++c) {
        std::vector<std::complex<double>> col(rd.n_az);
        for (int r = 0; r < rd.n_az; ++r) col[r] = rd.at(r, c);
        fft_forward(col);
        for (int r = 0; r < rd.n_az; ++r) rd.at(r, c) = col[r];
    }

    const double lambda = params.wavelength();
    const double prf = params.PRF;
    const int taps = opts.rcmc_taps;
    const int before = taps / 2 - 1;
    const double half_width = taps / 2.0;
    const double range_to_samples = 2.0 * params.Fr / kSpeedOfLight;

    ComplexImage out = rd;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < rd.n_az; ++k) {
        const double f_bin = fft_bin_freq(k, rd.n_az, prf);
        const double f_eta = dop.f_dc + wrap_half(f_bin - dop.f_dc_frac, prf);
        const auto src = rd.row(k);
        auto dst = out.row(k);
        for (int c = 0; c < rd.n_rg; ++c) {
            const double r0_col = kSpeedOfLight * rd.fast_time(c) / 2.0;
            const double delta_r = lambda * lambda * r0_col * f_eta * f_eta /
                                   (8.0 * params.v * params.v);
            const double pos = c + delta_r * range_to_samples;
            const int i0 = static_cast<int>(std::floor(pos));
            double weights[16];
            double wsum = 0.0;
            for (int t = 0; t < taps; ++t) {
                const double u = static_cast<double>(i0 - before + t) - pos;
                weights[t] = kaiser_sinc(u, half_width, opts.kaiser_beta);
                wsum += weights[t];
            }
            std::complex<double> acc(0.0, 0.0);
            for (int t = 0; t < taps; ++t) {
                const int j = i0 - before + t;
                if (j < 0 || j >= rd.n_rg) continue;
                acc += src[j] * (weights[t] / wsum);
            }
            dst[c] = acc;
        }
    }
    return out;
}

ComplexImage azimuth_compress(const ComplexImage& rd, const RadarParams& params,
                              const DopplerEstimate& dop, const FocusOptions& opts) {
    rd.validate();
    params.validate();
    check_axis(rd, params);
    if (rd.domain != Domain::Doppler) {
        throw std::invalid_argument("azimuth compression expects range-Doppler input");
    }
    const double lambda = params.wavelength();
    const double x_dc = lambda * dop.f_dc / (2.0 * params.v);
    if (!(std::abs(x_dc) < 1.0)) {
        throw std::invalid_argument("Doppler centroid implies superluminal beam geometry");
    }
    const double squint_factor = std::pow(1.0 - x_dc * x_dc, 1.5);
    const double prf = params.PRF;

    const std::vector<double> w = spectral_window(opts.window, rd.n_az, prf);

    ComplexImage out = rd;
    out.domain = Domain::SlowTime;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < rd.n_rg; ++c) {
        const double r0_col = kSpeedOfLight * rd.fast_time(c) / 2.0;
        const double ka = 2.0 * params.v * params.v * squint_factor / (lambda * r0_col);
        std::vector<std::complex<double>> col(rd.n_az);
        for (int k = 0; k < rd.n_az; ++k) {
            const double f_bin = fft_bin_freq(k, rd.n_az, prf);
            const double delta = wrap_half(f_bin - dop.f_dc_frac, prf);
            const double phase = -kPi * delta * delta / ka;
            // window indexed by offset from the centroid, where the signal sits
            const int wk = static_cast<int>(std::llround(delta / prf * rd.n_az));
            const double weight = w[(wk % rd.n_az + rd.n_az) % rd.n_az];
            col[k] = rd.at(k, c) * std::polar(weight, phase);
        }
        fft_inverse(col);
        for (int r = 0; r < rd.n_az; ++r) out.at(r, c) = col[r];
    }
    return out;
}

FocusReport measure_focus(const ComplexImage& focused, const RadarParams& params,
                          const DopplerEstimate& dop) {
    focused.validate();
    FocusReport report;
    double best = -1.0;
    for (int r = 0; r < focused.n_az; ++r) {
        for (int c = 0; c < focused.n_rg; ++c) {
            const double m = std::abs(focused.at(r, c));
            if (m > best) {
                best = m;
                report.peak_row = r;
                report.peak_col = c;
            }
        }
    }
    report.peak_magnitude = best;

    constexpr int kFactor = 32;
    auto width_3db = [&](const std::vector<std::complex<double>>& cut, int peak_idx) {
        const auto up = fft_upsample(std::span<const std::complex<double>>(cut), kFactor);
        const int n = static_cast<int>(up.size());
        int p = peak_idx * kFactor;
        // nudge to the local maximum of the upsampled cut
        for (int i = std::max(0, p - 2 * kFactor); i < std::min(n, p + 2 * kFactor); ++i) {
            if (std::abs(up[i]) > std::abs(up[p])) p = i;
        }
        const double target = std::abs(up[p]) / std::sqrt(2.0);
        double left = p, right = p;
        for (int i = p; i >= 0; --i) {
            if (std::abs(up[i]) < target) {
                const double a = std::abs(up[i]), b = std::abs(up[i + 1]);
                left = i + (target - a) / (b - a);
                break;
            }
        }
        for (int i = p; i < n; ++i) {
            if (std::abs(up[i]) < target) {
                const double a = std::abs(up[i]), b = std::abs(up[i - 1]);
                right = i - (target - a) / (b - a);
                break;
            }
        }
        return (right - left) / kFactor;
    };

    std::vector<std::complex<double>> range_cut(focused.n_rg);
    for (int c = 0; c < focused.n_rg; ++c) range_cut[c] = focused.at(report.peak_row, c);
    report.range_width_3db = width_3db(range_cut, report.peak_col);

    // shift the azimuth cut to baseband so upsampling does not straddle the
    // spectral wrap at +-PRF/2
    std::vector<std::complex<double>> az_cut(focused.n_az);
    for (int r = 0; r < focused.n_az; ++r) {
        const double phase = -2.0 * kPi * dop.f_dc_frac * r / params.PRF;
        az_cut[r] = focused.at(r, report.peak_col) * std::polar(1.0, phase);
    }
    report.az_width_3db = width_3db(az_cut, report.peak_row);
    return report;
}

} // namespace sar
