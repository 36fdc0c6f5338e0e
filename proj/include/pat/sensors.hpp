#pragma once

#include <span>
#include <vector>

#include "pat/image.hpp"

namespace pat {

struct GridIndex {
    int ix = 0;
    int iy = 0;
    bool operator==(const GridIndex&) const = default;
};

/// Point transducers snapped to grid pixels, plus the binary mask S(r).
/// Immutable after construction.
class SensorArray {
  public:
    SensorArray(const ImageGrid& grid, std::vector<GridIndex> positions, double radius_mm);

    const ImageGrid& grid() const { return grid_; }
    const std::vector<GridIndex>& positions() const { return positions_; }
    int count() const { return static_cast<int>(positions_.size()); }
    double radius_mm() const { return radius_mm_; }
    const Image& mask() const { return mask_; }

    std::size_t flat_index(int s) const {
        return static_cast<std::size_t>(positions_[s].iy) * grid_.nx + positions_[s].ix;
    }

  private:
    ImageGrid grid_;
    std::vector<GridIndex> positions_;
    double radius_mm_ = 0.0;
    Image mask_;
};

/// Place l_sensors transducers uniformly on a circle (angle 0 at +x, CCW),
/// snapping each to the nearest grid pixel; ties snap toward the smaller index.
/// Pixel (ix,iy) sits at physical (ix*dx, iy*dy).
SensorArray make_circular_array(const ImageGrid& grid, double center_x_mm, double center_y_mm,
                                double radius_mm, int l_sensors);

/// Sample-extraction operator P: gather field values at the sensor pixels.
std::vector<double> extract_samples(const Image& field, const SensorArray& sensors);

/// Zero-embedding operator P^a (exact adjoint of extract_samples).
Image embed_samples(std::span<const double> samples, const SensorArray& sensors);

} // namespace pat
