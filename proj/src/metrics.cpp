#include "pat/metrics.hpp"

#include <cmath>
#include <vector>

namespace pat {

namespace {

void check_region(const Image& img, const Rect& r) {
    require(r.w >= 1 && r.h >= 1 && r.x0 >= 0 && r.y0 >= 0 && r.x0 + r.w <= img.nx() &&
                r.y0 + r.h <= img.ny(),
            ErrorKind::geometry, "evaluation region outside image");
}

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(size) * size);
    double c = 0.5 * (size - 1);
    double sum = 0.0;
    for (int iy = 0; iy < size; ++iy)
        for (int ix = 0; ix < size; ++ix) {
            double g = std::exp(-((ix - c) * (ix - c) + (iy - c) * (iy - c)) / (2.0 * sigma * sigma));
            w[static_cast<std::size_t>(iy) * size + ix] = g;
            sum += g;
        }
    for (double& v : w) v /= sum;
    return w;
}

} // namespace

double ssim(const Image& x, const Image& ref, const SsimParams& p, Image* ssim_map) {
    require_same_grid(x, ref);
    require(p.window >= 3 && p.window % 2 == 1, ErrorKind::invalid_argument,
            "SSIM window must be odd and >= 3");
    require(p.sigma > 0.0, ErrorKind::invalid_argument, "SSIM sigma must be positive");

    Rect region = p.region.value_or(Rect{0, 0, x.nx(), x.ny()});
    check_region(x, region);
    require(region.w >= p.window && region.h >= p.window, ErrorKind::invalid_argument,
            "SSIM region smaller than window");

    double range;
    if (p.dynamic_range) {
        range = *p.dynamic_range;
        require(range > 0.0, ErrorKind::invalid_argument, "dynamic range must be positive");
    } else {
        double lo = ref.at(region.x0, region.y0), hi = lo;
        for (int iy = region.y0; iy < region.y0 + region.h; ++iy)
            for (int ix = region.x0; ix < region.x0 + region.w; ++ix) {
                double v = ref.at(ix, iy);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        range = hi - lo;
        require(range > 0.0, ErrorKind::degenerate, "SSIM undefined for a constant reference");
    }
    const double c1 = (p.k1 * range) * (p.k1 * range);
    const double c2 = (p.k2 * range) * (p.k2 * range);

    const std::vector<double> win = gaussian_window(p.window, p.sigma);
    if (ssim_map) *ssim_map = Image(x.grid());

    // window fully inside the region ("valid" correlation)
    double total = 0.0;
    std::size_t count = 0;
    for (int wy = region.y0; wy + p.window <= region.y0 + region.h; ++wy) {
        for (int wx = region.x0; wx + p.window <= region.x0 + region.w; ++wx) {
            double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
            const double* pw = win.data();
            for (int iy = 0; iy < p.window; ++iy)
                for (int ix = 0; ix < p.window; ++ix, ++pw) {
                    double a = x.at(wx + ix, wy + iy);
                    double b = ref.at(wx + ix, wy + iy);
                    mx += *pw * a;
                    my += *pw * b;
                    mxx += *pw * a * a;
                    myy += *pw * b * b;
                    mxy += *pw * a * b;
                }
            double vx = mxx - mx * mx;
            double vy = myy - my * my;
            double cxy = mxy - mx * my;
            double s = ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                       ((mx * mx + my * my + c1) * (vx + vy + c2));
            total += s;
            ++count;
            if (ssim_map) ssim_map->at(wx, wy) = s;
        }
    }
    return total / static_cast<double>(count);
}

double fom_db(const Image& x, std::optional<Rect> region_opt) {
    Rect region = region_opt.value_or(Rect{0, 0, x.nx(), x.ny()});
    check_region(x, region);

    double peak = x.at(region.x0, region.y0);
    double mean = 0.0;
    const std::size_t n = static_cast<std::size_t>(region.w) * region.h;
    for (int iy = region.y0; iy < region.y0 + region.h; ++iy)
        for (int ix = region.x0; ix < region.x0 + region.w; ++ix) {
            double v = x.at(ix, iy);
            peak = std::max(peak, v);
            mean += v;
        }
    mean /= static_cast<double>(n);

    double var = 0.0;
    for (int iy = region.y0; iy < region.y0 + region.h; ++iy)
        for (int ix = region.x0; ix < region.x0 + region.w; ++ix) {
            double d = x.at(ix, iy) - mean;
            var += d * d;
        }
    double sd = std::sqrt(var / static_cast<double>(n));
    require(sd > 0.0, ErrorKind::degenerate, "FOM undefined for a constant image");
    return 20.0 * std::log10(peak / sd);
}

} // namespace pat
