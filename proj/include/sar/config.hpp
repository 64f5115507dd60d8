#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sar/cfar.hpp"
#include "sar/focus.hpp"
#include "sar/sim.hpp"
#include "sar/types.hpp"

namespace sar {

/// Rectangular region of interest, half-open: rows [r0, r1), cols [c0, c1).
struct Roi {
    int r0 = 0, c0 = 0, r1 = 0, c1 = 0;

    int rows() const { return r1 - r0; }
    int cols() const { return c1 - c0; }
};

/// Everything one reproducible run needs, parsed from a line-oriented
/// `key = value` file with `[section]` headers (see FORMATS.md).
struct PipelineConfig {
    RadarParams radar;

    // [scene]
    int n_az = 0;
    int n_rg = 0;
    std::vector<SceneTarget> targets;
    std::optional<ClutterSpec> clutter;
    SimulationOptions sim;
    std::optional<std::filesystem::path> input; ///< ingest this raw image instead of simulating

    // [focus]
    int n_lines = 0; ///< 0 = min(2048, n_rg)
    double slope_quantile = 0.999;
    FocusOptions focus;

    // [despeckle]
    int median_m = 6;
    int median_n = 6;

    // [stats]
    std::size_t bins = 0; ///< 0 = Rice rule
    std::optional<Roi> roi; ///< unset = whole image

    // [cfar]
    int guard_az = 0, guard_rg = 0, train_az = 0, train_rg = 0;
    double p_fa = 1e-6;
    std::optional<double> q_override;

    // [run]
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";

    int effective_n_lines() const { return n_lines > 0 ? std::min(n_lines, n_rg) : std::min(2048, n_rg); }
};

/// Parses and fully validates a config file. Unknown sections or keys are
/// rejected; every diagnostic carries the offending line number or field.
PipelineConfig read_config(const std::filesystem::path& path);

/// Canonical `key = value` dump of the effective configuration; hashing
/// this string fingerprints a run.
std::string canonical_config(const PipelineConfig& cfg);

} // namespace sar
