#pragma once

#include <memory>

#include "pat/config.hpp"
#include "pat/metrics.hpp"

namespace pat {

/// Geometry and operators instantiated from a config. Non-copyable (owns the
/// FFT plan); share by reference.
class Workbench {
  public:
    explicit Workbench(const ExperimentConfig& cfg);

    const ImageGrid& grid() const { return grid_; }
    const SpectralPlan& plan() const { return *plan_; }
    const SensorArray& sensors() const { return *sensors_; }
    const TimeGrid& times() const { return times_; }
    Rect imaging_region() const { return imaging_region_; }

  private:
    ImageGrid grid_;
    std::unique_ptr<SpectralPlan> plan_;
    std::unique_ptr<SensorArray> sensors_;
    TimeGrid times_;
    Rect imaging_region_;
};

Image phantom_for(const ExperimentConfig& cfg, const Workbench& bench);

/// apply_H on the configured model plus Gaussian noise at cfg.snr_db.
/// With cfg.fine_grid, the clean data is generated on a 2x finer grid
/// (same physical geometry) to avoid the inverse crime.
Measurements simulate(const ExperimentConfig& cfg, const Workbench& bench, const Image& phantom);

struct ReconResult {
    Image image;
    SolveReport report;
    double lambda_used = 0.0;
    nlohmann::json tuning; // per-lambda metrics in grid mode
};

/// Run the configured method. A nonempty lambda_grid requires ground_truth
/// and picks the lambda with the best SSIM over the imaging region.
ReconResult reconstruct(const ExperimentConfig& cfg, const Workbench& bench,
                        const Measurements& meas, const Image* ground_truth);

/// SSIM restricted to the imaging region (the comparison the harness reports).
double imaging_ssim(const Workbench& bench, const Image& recon, const Image& reference);

} // namespace pat
