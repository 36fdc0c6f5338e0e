#include "pat/sensors.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace pat {

namespace {

// Nearest integer with ties toward the smaller index.
int snap(double v) { return static_cast<int>(std::ceil(v - 0.5)); }

} // namespace

SensorArray::SensorArray(const ImageGrid& grid, std::vector<GridIndex> positions, double radius_mm)
    : grid_(grid), positions_(std::move(positions)), radius_mm_(radius_mm), mask_(grid) {
    require(!positions_.empty(), ErrorKind::invalid_argument, "sensor array needs at least one sensor");
    std::set<std::pair<int, int>> seen;
    for (const GridIndex& p : positions_) {
        require(p.ix >= 0 && p.ix < grid_.nx && p.iy >= 0 && p.iy < grid_.ny, ErrorKind::geometry,
                "sensor position outside grid");
        bool fresh = seen.insert({p.ix, p.iy}).second;
        require(fresh, ErrorKind::resolution,
                "two sensors snapped to the same pixel; refine the grid or reduce L");
        mask_.at(p.ix, p.iy) = 1.0;
    }
}

SensorArray make_circular_array(const ImageGrid& grid, double center_x_mm, double center_y_mm,
                                double radius_mm, int l_sensors) {
    require(l_sensors >= 1, ErrorKind::invalid_argument, "need at least one sensor");
    require(radius_mm > 0.0, ErrorKind::invalid_argument, "radius must be positive");

    std::vector<GridIndex> positions;
    positions.reserve(l_sensors);
    for (int s = 0; s < l_sensors; ++s) {
        double theta = 2.0 * std::numbers::pi * s / l_sensors;
        double x = center_x_mm + radius_mm * std::cos(theta);
        double y = center_y_mm + radius_mm * std::sin(theta);
        GridIndex p{snap(x / grid.dx), snap(y / grid.dy)};
        require(p.ix >= 0 && p.ix < grid.nx && p.iy >= 0 && p.iy < grid.ny, ErrorKind::geometry,
                "sensor circle exits the grid (sensor " + std::to_string(s) + ")");
        positions.push_back(p);
    }
    return SensorArray(grid, std::move(positions), radius_mm);
}

std::vector<double> extract_samples(const Image& field, const SensorArray& sensors) {
    require(field.grid() == sensors.grid(), ErrorKind::dimension_mismatch,
            "field grid does not match sensor grid");
    std::vector<double> out(sensors.count());
    for (int s = 0; s < sensors.count(); ++s) out[s] = field[sensors.flat_index(s)];
    return out;
}

Image embed_samples(std::span<const double> samples, const SensorArray& sensors) {
    require(samples.size() == static_cast<std::size_t>(sensors.count()), ErrorKind::dimension_mismatch,
            "sample count does not match sensor count");
    Image out(sensors.grid());
    for (int s = 0; s < sensors.count(); ++s) out[sensors.flat_index(s)] = samples[s];
    return out;
}

} // namespace pat
