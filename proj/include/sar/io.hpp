#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sar/cfar.hpp"
#include "sar/image.hpp"
#include "sar/stats.hpp"

namespace sar {

/// Binary rasters: magic "SARC" (complex) / "SARM" (magnitude), version
/// byte, little-endian u32 dimensions and f64 payload. See FORMATS.md.
void write_image(const std::filesystem::path& path, const ComplexImage& img);
void write_image(const std::filesystem::path& path, const MagnitudeImage& img);
ComplexImage read_complex_image(const std::filesystem::path& path);
MagnitudeImage read_magnitude_image(const std::filesystem::path& path);

/// 8-bit PGM of the image in dB relative to its maximum:
/// pixel = clamp(255 * (20*log10(x/max) - db_floor) / (-db_floor)).
/// db_floor must be negative; zero pixels map to 0.
void export_pgm(const MagnitudeImage& img, const std::filesystem::path& path, double db_floor);

/// 1-bit PBM of the detection mask.
void export_pbm(const DetectionMap& map, const std::filesystem::path& path);

/// CSV writers; column layouts are fixed and documented in FORMATS.md.
void write_histogram_csv(const EmpiricalPdf& pdf, const std::filesystem::path& path);
void write_detections_csv(const DetectionMap& map, const std::filesystem::path& path);
void write_kl_csv(const KlReport& report, const std::filesystem::path& path);
void write_fits_csv(const std::vector<FittedModel>& fits, const std::filesystem::path& path);
std::vector<FittedModel> read_fits_csv(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file's bytes (manifest fingerprints).
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::uint64_t fnv1a_bytes(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull);

} // namespace sar
