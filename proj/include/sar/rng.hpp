#pragma once

#include <cstdint>

#include "sar/types.hpp"

namespace sar {

/// splitmix64 finalizer; good 64->64 bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic per-stream generator (splitmix64). Streams are derived
/// from (seed, stream index) so every pixel owns an independent sequence
/// and results do not depend on how work is split across threads.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(seed ^ mix64(stream ^ 0xA3C59AC2F1ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double strictly inside (0, 1).
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller, consumes two uniforms).
    double normal();

private:
    std::uint64_t state_;
};

/// One amplitude draw from the given family.
double sample_amplitude(DistFamily family, double p1, double p2, StreamRng& rng);

} // namespace sar
