#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sar/config.hpp"

namespace sar {

/// One executed pipeline stage: its outputs, wall clock, and a combined
/// FNV-1a digest of the output files.
struct StageRecord {
    std::string name;
    std::vector<std::filesystem::path> files;
    double wall_ms = 0.0;
    std::uint64_t hash = 0;
};

struct RunManifest {
    std::string tool_version;
    std::uint64_t config_hash = 0;
    std::vector<StageRecord> stages;

    std::string to_text() const;
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Stage names in execution order:
/// simulate, rc, doppler, rcmc, focus, magnitude, despeckle, stats, cfar.
const std::vector<std::string>& pipeline_stage_names();

/// Runs a single named stage against the products already present in
/// cfg.out_dir and returns the files it wrote. Stages communicate only
/// through files, so running them one at a time equals one pipeline run
/// bit for bit.
std::vector<std::filesystem::path> run_stage(const PipelineConfig& cfg, const std::string& stage);

/// Runs simulate .. upto (inclusive; empty = the whole chain), persisting
/// every intermediate product plus manifest.txt. A failing stage aborts
/// with sar::StageError; products of earlier stages stay on disk.
RunManifest run_pipeline(const PipelineConfig& cfg, const std::string& upto = "");

} // namespace sar
