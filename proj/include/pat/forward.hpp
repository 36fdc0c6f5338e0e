#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pat/image.hpp"
#include "pat/measurements.hpp"
#include "pat/sensors.hpp"

namespace pat {

namespace detail {
class FftPlan;
}

/// Uniform sample times t_i = (i+1)*dt, i = 0..M-1 (the i=0 sample equal to
/// p0 itself is not acquired).
struct TimeGrid {
    int m_samples = 0;
    double dt_us = 0.0;

    TimeGrid() = default;
    TimeGrid(int m, double dt) : m_samples(m), dt_us(dt) {
        require(m_samples >= 1, ErrorKind::invalid_argument, "time grid needs M >= 1");
        require(dt_us > 0.0, ErrorKind::invalid_argument, "dt must be positive");
    }
    double t(int i) const { return dt_us * (i + 1); }
};

struct PlanOptions {
    int threads = 1;          // workers for the per-time-step loops
    bool measure_fft = false; // FFTW_MEASURE (faster transforms, nondeterministic plan choice)
};

/// Precomputed c0*|k| wavenumber grid plus FFT workspace for applying the
/// exact time propagator cos(c0*|k|*t). Immutable and shareable across
/// threads; each operator call allocates its own scratch.
class SpectralPlan {
  public:
    SpectralPlan(const ImageGrid& grid, double c0_mm_per_us, PlanOptions opts = {});
    ~SpectralPlan();
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    const ImageGrid& grid() const { return grid_; }
    double c0() const { return c0_; }
    int threads() const { return threads_; }

    /// c0*|k| over the full nx x ny DFT frequency grid, rad/us.
    const std::vector<double>& omega() const { return omega_; }
    double omega_at(int ix, int iy) const { return omega_[static_cast<std::size_t>(iy) * grid_.nx + ix]; }

    // Internal: half-spectrum layout used by the r2c filters.
    const std::vector<double>& omega_half() const { return omega_half_; }
    const detail::FftPlan& fft() const { return *fft_; }

  private:
    ImageGrid grid_;
    double c0_;
    int threads_;
    std::vector<double> omega_;
    std::vector<double> omega_half_;
    std::unique_ptr<detail::FftPlan> fft_;
};

/// Evolve an initial pressure field to time t (us) by spectral filtering with
/// cos(c0*|k|*t). t = 0 is the identity.
Image propagate(const SpectralPlan& plan, const Image& p0, double t_us);

/// Forward model H: sample the propagated field at every sensor and time.
Measurements apply_H(const SpectralPlan& plan, const SensorArray& sensors, const TimeGrid& times,
                     const Image& p0);

/// Adjoint H^T: back-propagate embedded measurement columns and accumulate.
Image apply_Ht(const SpectralPlan& plan, const SensorArray& sensors, const TimeGrid& times,
               const Measurements& meas);

/// Normal operator H^T H, fused per time step (forward filter, mask by the
/// sensor image, back filter, accumulate) without materializing measurements.
/// Peak transient allocation is a fixed number of grid-sized buffers,
/// independent of M and L.
Image apply_HtH(const SpectralPlan& plan, const SensorArray& sensors, const TimeGrid& times,
                const Image& v);

/// Clean data via apply_H plus i.i.d. Gaussian noise scaled to the requested
/// SNR on the stacked measurement vector; snr_db = nullopt means noiseless.
/// Deterministic per seed.
Measurements simulate_data(const SpectralPlan& plan, const SensorArray& sensors,
                           const TimeGrid& times, const Image& phantom,
                           std::optional<double> snr_db, std::uint64_t seed);

// Scratch-allocation counters for the operator calls above (test hooks).
std::size_t forward_scratch_peak_bytes();
void reset_forward_scratch_stats();

} // namespace pat
