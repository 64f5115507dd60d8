#include "sar/sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sar/errors.hpp"
#include "sar/rng.hpp"

namespace sar {

namespace {

constexpr double kPi = std::numbers::pi;

struct TargetGeometry {
    SceneTarget target;
    double eta_vertex;   // slow-time of closest approach
    double gate_lo;      // beam gate [gate_lo, gate_hi)
    double gate_hi;
};

double slant_range(const TargetGeometry& g, double eta, double v) {
    const double d = v * (eta - g.eta_vertex);
    return std::sqrt(g.target.R0_t * g.target.R0_t + d * d);
}

} // namespace

double squint_time_offset(const RadarParams& params, double injected_fdc, double R0_t) {
    if (injected_fdc == 0.0) return 0.0;
    // radial velocity at beam center implied by the requested centroid
    const double rho = -params.wavelength() * injected_fdc / 2.0;
    if (std::abs(rho) >= params.v) {
        throw std::invalid_argument("injected Doppler centroid implies a radial velocity "
                                    "faster than the platform");
    }
    return rho * R0_t / (params.v * std::sqrt(params.v * params.v - rho * rho));
}

double aperture_time(const RadarParams& params, double az_bandwidth_fraction, double R0_t) {
    const double ka = 2.0 * params.v * params.v / (params.wavelength() * R0_t);
    return az_bandwidth_fraction * params.PRF / ka;
}

ComplexImage simulate_echo(const RadarParams& params,
                           std::span<const SceneTarget> targets,
                           const std::optional<ClutterSpec>& clutter,
                           int n_az, int n_rg, std::uint64_t seed,
                           const SimulationOptions& opts) {
    params.validate();
    if (n_az < 1 || n_rg < 1) throw std::invalid_argument("n_az and n_rg must be >= 1");
    if (clutter) clutter->validate();
    if (!(opts.az_bandwidth_fraction > 0.0) || opts.az_bandwidth_fraction >= 1.0) {
        throw std::invalid_argument("az_bandwidth_fraction must be in (0, 1)");
    }

    ComplexImage img(n_az, n_rg);
    img.dt = 1.0 / params.Fr;
    img.deta = 1.0 / params.PRF;
    img.t0 = params.fast_time_origin();
    img.eta0 = opts.eta0 ? *opts.eta0 : -(n_az / 2) * img.deta;
    img.domain = Domain::SlowTime;

    std::vector<TargetGeometry> geos;
    geos.reserve(targets.size());
    for (const auto& tgt : targets) {
        if (!(tgt.R0_t > 0.0)) throw std::invalid_argument("target R0_t must be positive");
        TargetGeometry g;
        g.target = tgt;
        g.eta_vertex = tgt.eta_c - squint_time_offset(params, opts.injected_fdc, tgt.R0_t);
        const double ta = aperture_time(params, opts.az_bandwidth_fraction, tgt.R0_t);
        g.gate_lo = tgt.eta_c - ta / 2.0;
        g.gate_hi = tgt.eta_c + ta / 2.0;
        geos.push_back(g);
    }

    // Every illuminated pulse must see the full chirp inside the sampled
    // fast-time window; partial echoes are rejected, not truncated.
    const double t_first = img.t0;
    const double t_last = img.t0 + (n_rg - 1) * img.dt;
    for (const auto& g : geos) {
        for (int r = 0; r < n_az; ++r) {
            const double eta = img.slow_time(r);
            if (eta < g.gate_lo || eta >= g.gate_hi) continue;
            const double delay = 2.0 * slant_range(g, eta, params.v) / kSpeedOfLight;
            if (delay - params.T / 2.0 < t_first || delay + params.T / 2.0 > t_last) {
                throw std::invalid_argument(
                    "target echo support leaves the fast-time window at slow-time " +
                    std::to_string(eta));
            }
        }
    }

    const double beta = params.chirp_rate;
    const double four_pi_fc_over_c = 4.0 * kPi * params.f_c / kSpeedOfLight;

#pragma omp parallel for schedule(static)
    for (int r = 0; r < n_az; ++r) {
        const double eta = img.slow_time(r);
        auto line = img.row(r);
        for (const auto& g : geos) {
            if (eta < g.gate_lo || eta >= g.gate_hi) continue;
            const double range = slant_range(g, eta, params.v);
            const double delay = 2.0 * range / kSpeedOfLight;
            const double carrier = -four_pi_fc_over_c * range;
            // columns whose fast time falls in [delay - T/2, delay + T/2)
            int c_lo = static_cast<int>(std::ceil((delay - params.T / 2.0 - img.t0) / img.dt));
            int c_hi = static_cast<int>(std::ceil((delay + params.T / 2.0 - img.t0) / img.dt));
            c_lo = std::max(c_lo, 0);
            c_hi = std::min(c_hi, n_rg);
            for (int c = c_lo; c < c_hi; ++c) {
                const double u = img.fast_time(c) - delay;
                const double phase = carrier + kPi * beta * u * u;
                line[c] += g.target.sigma * std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
        if (clutter) {
            for (int c = 0; c < n_rg; ++c) {
                StreamRng rng(seed, static_cast<std::uint64_t>(r) * n_rg + c);
                const double amp = sample_amplitude(clutter->family, clutter->p1, clutter->p2, rng);
                const double phi = 2.0 * kPi * rng.uniform01();
                line[c] += amp * std::complex<double>(std::cos(phi), std::sin(phi));
            }
        }
    }
    return img;
}

std::vector<std::complex<double>> ideal_chirp_replica(const RadarParams& params, int n) {
    params.validate();
    const int n_chirp = params.chirp_samples();
    if (n < n_chirp) {
        throw std::invalid_argument("replica length " + std::to_string(n) +
                                    " shorter than the chirp (" + std::to_string(n_chirp) +
                                    " samples)");
    }
    std::vector<std::complex<double>> h(n, {0.0, 0.0});
    const double dt = 1.0 / params.Fr;
    auto chirp = [&](double t) {
        const double phase = kPi * params.chirp_rate * t * t;
        return std::complex<double>(std::cos(phase), std::sin(phase));
    };
    for (int m = 0;; ++m) {
        const double t = m * dt;
        if (t >= params.T / 2.0) break;
        h[m] = chirp(t);
    }
    for (int m = 1;; ++m) {
        const double t = -m * dt;
        if (t < -params.T / 2.0) break;
        h[n - m] = chirp(t);
    }
    return h;
}

MagnitudeImage clutter_amplitude_field(const ClutterSpec& clutter, int n_az, int n_rg,
                                       std::uint64_t seed) {
    clutter.validate();
    if (n_az < 1 || n_rg < 1) throw std::invalid_argument("n_az and n_rg must be >= 1");
    MagnitudeImage out(n_az, n_rg);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n_az; ++r) {
        for (int c = 0; c < n_rg; ++c) {
            StreamRng rng(seed, static_cast<std::uint64_t>(r) * n_rg + c);
            out.at(r, c) = sample_amplitude(clutter.family, clutter.p1, clutter.p2, rng);
        }
    }
    return out;
}

ComplexImage clutter_complex_field(const ClutterSpec& clutter, int n_az, int n_rg,
                                   std::uint64_t seed) {
    clutter.validate();
    if (n_az < 1 || n_rg < 1) throw std::invalid_argument("n_az and n_rg must be >= 1");
    ComplexImage out(n_az, n_rg);
    out.dt = 1.0;
    out.deta = 1.0;
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n_az; ++r) {
        for (int c = 0; c < n_rg; ++c) {
            StreamRng rng(seed, static_cast<std::uint64_t>(r) * n_rg + c);
            const double amp = sample_amplitude(clutter.family, clutter.p1, clutter.p2, rng);
            const double phi = 2.0 * std::numbers::pi * rng.uniform01();
            out.at(r, c) = amp * std::complex<double>(std::cos(phi), std::sin(phi));
        }
    }
    return out;
}

} // namespace sar
