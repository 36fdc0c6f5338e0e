#pragma once

#include <optional>

#include "pat/image.hpp"

namespace pat {

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    std::optional<Rect> region;           // default: full image
    std::optional<double> dynamic_range;  // default: max(ref) - min(ref) over region
};

/// Mean local SSIM with a Gaussian window over all fully-interior window
/// positions of the evaluation region. ref must be nonconstant unless a
/// dynamic range is supplied. ssim(x, x) == 1 exactly.
double ssim(const Image& x, const Image& ref, const SsimParams& params = {},
            Image* ssim_map = nullptr);

/// 20*log10(peak / population standard deviation) over the region, dB.
double fom_db(const Image& x, std::optional<Rect> region = {});

} // namespace pat
