#include "pat/phantoms.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pat/io.hpp"

namespace pat {

void PhantomSpec::validate() const {
    require(size_px >= 16, ErrorKind::invalid_argument, "phantom size must be >= 16 px");
    require(amplitude > 0.0, ErrorKind::invalid_argument, "amplitude must be positive");
    if (kind == Kind::file)
        require(!path.empty(), ErrorKind::invalid_argument, "file phantom needs a path");
}

PhantomSpec::Kind phantom_kind_from_string(const std::string& name) {
    if (name == "derenzo") return PhantomSpec::Kind::derenzo;
    if (name == "vessel") return PhantomSpec::Kind::vessel;
    if (name == "disks") return PhantomSpec::Kind::disks;
    if (name == "file") return PhantomSpec::Kind::file;
    throw Error(ErrorKind::config, "unknown phantom kind: " + name);
}

std::string to_string(PhantomSpec::Kind kind) {
    switch (kind) {
    case PhantomSpec::Kind::derenzo: return "derenzo";
    case PhantomSpec::Kind::vessel: return "vessel";
    case PhantomSpec::Kind::disks: return "disks";
    case PhantomSpec::Kind::file: return "file";
    }
    return "?";
}

namespace {

// Painting happens in subregion pixel coordinates; (0,0) is the subregion
// corner. Values are written as `amplitude` directly so the peak is exact.
struct Canvas {
    Image& img;
    Rect region;
    double amplitude;

    void disc(double cx, double cy, double r) {
        int x_lo = std::max(0, static_cast<int>(std::floor(cx - r)));
        int x_hi = std::min(region.w - 1, static_cast<int>(std::ceil(cx + r)));
        int y_lo = std::max(0, static_cast<int>(std::floor(cy - r)));
        int y_hi = std::min(region.h - 1, static_cast<int>(std::ceil(cy + r)));
        for (int iy = y_lo; iy <= y_hi; ++iy)
            for (int ix = x_lo; ix <= x_hi; ++ix) {
                double dx = ix - cx, dy = iy - cy;
                if (dx * dx + dy * dy <= r * r) img.at(region.x0 + ix, region.y0 + iy) = amplitude;
            }
    }

    void ring(double cx, double cy, double r_out, double r_in) {
        int x_lo = std::max(0, static_cast<int>(std::floor(cx - r_out)));
        int x_hi = std::min(region.w - 1, static_cast<int>(std::ceil(cx + r_out)));
        int y_lo = std::max(0, static_cast<int>(std::floor(cy - r_out)));
        int y_hi = std::min(region.h - 1, static_cast<int>(std::ceil(cy + r_out)));
        for (int iy = y_lo; iy <= y_hi; ++iy)
            for (int ix = x_lo; ix <= x_hi; ++ix) {
                double dx = ix - cx, dy = iy - cy;
                double d2 = dx * dx + dy * dy;
                if (d2 <= r_out * r_out && d2 >= r_in * r_in)
                    img.at(region.x0 + ix, region.y0 + iy) = amplitude;
            }
    }
};

// Derenzo layout: six 60-degree sectors of rods on a triangular lattice with
// center pitch 4r (one-diameter gaps), apex toward the phantom center.
//   phantom radius  Rp   = 0.46 * size
//   rod radius      r_s  = f_s * Rp,  f = {.042, .052, .065, .082, .105, .135}
//   first row at    R_in = 0.18 * Rp + 2 * r_s
// Rods are kept while fully inside both the phantom disc and their sector.
constexpr double kDerenzoRadius = 0.46;
constexpr double kDerenzoInner = 0.18;
constexpr double kDerenzoFractions[6] = {0.042, 0.052, 0.065, 0.082, 0.105, 0.135};

void paint_derenzo(Canvas& canvas, int size) {
    const double c = 0.5 * (size - 1);
    const double rp = kDerenzoRadius * size;
    for (int s = 0; s < 6; ++s) {
        double r = kDerenzoFractions[s] * rp;
        double pitch = 4.0 * r;
        double bisector = (60.0 * s + 30.0) * std::numbers::pi / 180.0;
        double ux = std::cos(bisector), uy = std::sin(bisector);
        double r_in = kDerenzoInner * rp + 2.0 * r;
        for (int k = 0;; ++k) {
            double rho = r_in + k * pitch * std::numbers::sqrt3 / 2.0;
            if (rho + r > rp) break;
            for (int j = 0; j <= k; ++j) {
                double off = (j - 0.5 * k) * pitch;
                double d = std::hypot(rho, off);
                if (d + r > rp) continue;
                if (std::abs(std::atan2(off, rho)) >
                    std::numbers::pi / 6.0 - std::asin(std::min(1.0, r / d)))
                    continue;
                canvas.disc(c + rho * ux - off * uy, c + rho * uy + off * ux, r);
            }
        }
    }
}

void paint_vessel(Canvas& canvas, int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> bend(0.0, 0.10);

    struct Walker {
        double x, y, heading, thickness;
        int depth;
    };
    std::vector<Walker> stack;
    stack.push_back({0.08 * size, 0.35 * size + 0.3 * size * u(rng), 0.3 * (u(rng) - 0.5),
                     0.030 * size, 0});

    const double margin = 2.0;
    while (!stack.empty()) {
        Walker w = stack.back();
        stack.pop_back();
        while (w.thickness > 0.5) {
            canvas.disc(w.x, w.y, w.thickness);
            w.x += 1.5 * std::cos(w.heading);
            w.y += 1.5 * std::sin(w.heading);
            w.heading += bend(rng);
            w.thickness *= 0.9965;
            if (w.x < margin || w.x > size - margin || w.y < margin || w.y > size - margin) break;
            if (w.depth < 3 && u(rng) < 0.025) {
                double sign = u(rng) < 0.5 ? -1.0 : 1.0;
                stack.push_back({w.x, w.y, w.heading + sign * (0.4 + 0.5 * u(rng)),
                                 w.thickness * 0.75, w.depth + 1});
            }
        }
    }
}

void paint_disks(Canvas& canvas, int size) {
    const double s = size;
    canvas.disc(0.30 * s, 0.35 * s, 0.100 * s);
    canvas.disc(0.68 * s, 0.30 * s, 0.060 * s);
    canvas.disc(0.40 * s, 0.68 * s, 0.140 * s);
    canvas.ring(0.70 * s, 0.68 * s, 0.120 * s, 0.070 * s);
    canvas.disc(0.55 * s, 0.50 * s, 0.025 * s);
}

void embed_file(Image& out, const Rect& region, const PhantomSpec& spec, const ImageGrid& grid) {
    bool is_png = spec.path.size() > 4 && spec.path.substr(spec.path.size() - 4) == ".png";
    Image src = is_png ? read_png(spec.path, grid.dx, grid.dy) : read_image(spec.path);
    require(src.nx() == spec.size_px && src.ny() == spec.size_px, ErrorKind::io,
            spec.path + ": expected " + std::to_string(spec.size_px) + "x" +
                std::to_string(spec.size_px) + " phantom, got " + std::to_string(src.nx()) + "x" +
                std::to_string(src.ny()));
    double lo = min_value(src), hi = max_value(src);
    require(lo >= 0.0, ErrorKind::io, spec.path + ": phantom has negative values");
    require(hi > 0.0, ErrorKind::degenerate, spec.path + ": phantom is identically zero");

    double scale = spec.amplitude / hi;
    for (int iy = 0; iy < spec.size_px; ++iy)
        for (int ix = 0; ix < spec.size_px; ++ix) {
            double v = src.at(ix, iy);
            out.at(region.x0 + ix, region.y0 + iy) = v == hi ? spec.amplitude : v * scale;
        }
}

} // namespace

Image make_phantom(const PhantomSpec& spec, const ImageGrid& grid) {
    spec.validate();
    Rect region = centered_region(grid, spec.size_px);
    Image img(grid);
    Canvas canvas{img, region, spec.amplitude};

    switch (spec.kind) {
    case PhantomSpec::Kind::derenzo: paint_derenzo(canvas, spec.size_px); break;
    case PhantomSpec::Kind::vessel: paint_vessel(canvas, spec.size_px, spec.seed); break;
    case PhantomSpec::Kind::disks: paint_disks(canvas, spec.size_px); break;
    case PhantomSpec::Kind::file: embed_file(img, region, spec, grid); break;
    }
    require(max_value(img) == spec.amplitude, ErrorKind::numeric,
            "phantom generator painted nothing");
    return img;
}

} // namespace pat
