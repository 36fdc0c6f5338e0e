#pragma once

#include <cstdint>
#include <string>

#include "pat/image.hpp"

namespace pat {

struct PhantomSpec {
    enum class Kind { derenzo, vessel, disks, file };

    Kind kind = Kind::derenzo;
    int size_px = 128;      // imaging-subregion edge length
    double amplitude = 1.0; // peak initial pressure (Pa)
    std::uint64_t seed = 0; // stochastic kinds only
    std::string path;       // kind == file

    void validate() const;
};

PhantomSpec::Kind phantom_kind_from_string(const std::string& name);
std::string to_string(PhantomSpec::Kind kind);

/// Build a phantom centered in the size_px x size_px imaging subregion of
/// `grid`; exactly zero outside it, min >= 0, max == amplitude exactly.
/// Stochastic kinds are deterministic per seed.
Image make_phantom(const PhantomSpec& spec, const ImageGrid& grid);

} // namespace pat
