#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pat/error.hpp"

namespace pat {

/// Square-cell 2D computational grid. Spacing in mm.
struct ImageGrid {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;

    ImageGrid() = default;
    ImageGrid(int nx_, int ny_, double dx_, double dy_) : nx(nx_), ny(ny_), dx(dx_), dy(dy_) {
        require(nx >= 2 && ny >= 2, ErrorKind::invalid_argument, "grid needs nx,ny >= 2");
        require(dx > 0.0 && dy > 0.0, ErrorKind::invalid_argument, "grid spacing must be positive");
    }

    std::size_t count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double extent_x() const { return nx * dx; }
    double extent_y() const { return ny * dy; }
    bool operator==(const ImageGrid&) const = default;
};

/// 2D scalar field on an ImageGrid, stored row-major: data[iy*nx + ix].
/// This layout is the vectorize/reshape contract used by all operators.
class Image {
  public:
    Image() = default;
    explicit Image(const ImageGrid& grid) : grid_(grid), data_(grid.count(), 0.0) {}
    Image(const ImageGrid& grid, std::vector<double> data) : grid_(grid), data_(std::move(data)) {
        require(data_.size() == grid_.count(), ErrorKind::dimension_mismatch,
                "image data length does not match grid");
    }

    const ImageGrid& grid() const { return grid_; }
    int nx() const { return grid_.nx; }
    int ny() const { return grid_.ny; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(int ix, int iy) { return data_[static_cast<std::size_t>(iy) * grid_.nx + ix]; }
    double at(int ix, int iy) const { return data_[static_cast<std::size_t>(iy) * grid_.nx + ix]; }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

  private:
    ImageGrid grid_;
    std::vector<double> data_;
};

inline void require_same_grid(const Image& a, const Image& b) {
    require(a.grid() == b.grid(), ErrorKind::dimension_mismatch, "images live on different grids");
}

/// Pixel-aligned rectangle [x0, x0+w) x [y0, y0+h).
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;
    bool contains(int ix, int iy) const {
        return ix >= x0 && ix < x0 + w && iy >= y0 && iy < y0 + h;
    }
};

inline Rect centered_region(const ImageGrid& grid, int size_px) {
    require(size_px >= 1 && size_px <= grid.nx && size_px <= grid.ny, ErrorKind::geometry,
            "region does not fit inside grid");
    return Rect{(grid.nx - size_px) / 2, (grid.ny - size_px) / 2, size_px, size_px};
}

// Small dense-vector kernels shared by the solvers. All sums run in index
// order so results are reproducible.
double dot(const Image& a, const Image& b);
double squared_norm(const Image& a);
double norm(const Image& a);
void axpy(double alpha, const Image& x, Image& y); // y += alpha*x
void scale(Image& x, double alpha);
Image lincomb(double a, const Image& x, double b, const Image& y);

double min_value(const Image& a);
double max_value(const Image& a);

} // namespace pat
