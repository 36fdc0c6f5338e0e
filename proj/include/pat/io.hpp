#pragma once

#include <filesystem>

#include "pat/image.hpp"
#include "pat/measurements.hpp"

#include <nlohmann/json_fwd.hpp>

namespace pat {

// Binary container: 16-byte header (8-byte magic "PATRECON", u32 version,
// u32 JSON length), a JSON metadata block, then the payload as row-major
// little-endian float64. Writes go to a temp file in the target directory
// and are renamed into place.

inline constexpr int kFormatVersion = 1;

void write_image(const std::filesystem::path& path, const Image& img,
                 const nlohmann::json& provenance);
void write_image(const std::filesystem::path& path, const Image& img);
Image read_image(const std::filesystem::path& path, nlohmann::json* metadata = nullptr);

void write_measurements(const std::filesystem::path& path, const Measurements& meas,
                        const nlohmann::json& provenance);
void write_measurements(const std::filesystem::path& path, const Measurements& meas);
Measurements read_measurements(const std::filesystem::path& path, nlohmann::json* metadata = nullptr);

/// 8-bit grayscale preview, linearly scaled min->0, max->255. Never read back
/// for computation. Returns {min, max} used for the scaling.
std::pair<double, double> write_png(const std::filesystem::path& path, const Image& img);

/// Load an 8/16-bit grayscale PNG as values in [0, 1].
Image read_png(const std::filesystem::path& path, double dx_mm, double dy_mm);

} // namespace pat
