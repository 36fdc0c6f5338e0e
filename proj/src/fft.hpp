#pragma once

// Internal FFTW3 wrapper: real<->half-complex 2D transforms for a fixed grid,
// plus allocation-tracked aligned scratch buffers. Not part of the public API.

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace pat::detail {

// Scratch allocation accounting (bytes currently held / peak since reset).
// Used by tests to pin the O(N) transient-memory contract of the operators.
void scratch_account_alloc(std::size_t bytes);
void scratch_account_free(std::size_t bytes);
std::size_t scratch_peak_bytes();
std::size_t scratch_current_bytes();
void reset_scratch_stats();

/// RAII fftw_malloc'd buffer of T, counted in the scratch statistics.
template <typename T>
class FftwBuffer {
  public:
    explicit FftwBuffer(std::size_t count) : count_(count) {
        ptr_ = static_cast<T*>(fftw_malloc(sizeof(T) * count));
        scratch_account_alloc(sizeof(T) * count);
        for (std::size_t i = 0; i < count; ++i) ptr_[i] = T{};
    }
    ~FftwBuffer() {
        fftw_free(ptr_);
        scratch_account_free(sizeof(T) * count_);
    }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    T* data() { return ptr_; }
    const T* data() const { return ptr_; }
    T& operator[](std::size_t i) { return ptr_[i]; }
    const T& operator[](std::size_t i) const { return ptr_[i]; }
    std::size_t size() const { return count_; }

  private:
    T* ptr_ = nullptr;
    std::size_t count_ = 0;
};

using RealBuffer = FftwBuffer<double>;
using ComplexBuffer = FftwBuffer<std::complex<double>>;

/// Out-of-place r2c/c2r plan pair for an ny x nx row-major grid.
/// forward() is the unnormalized DFT; inverse() includes the 1/N factor, so
/// inverse(forward(x)) == x up to roundoff. Executions use the new-array
/// interface and are safe to run concurrently on distinct buffers.
class FftPlan {
  public:
    FftPlan(int nx, int ny, bool measure);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t real_count() const { return static_cast<std::size_t>(nx_) * ny_; }
    std::size_t spec_count() const { return static_cast<std::size_t>(nx_ / 2 + 1) * ny_; }

    void forward(double* in, std::complex<double>* out) const;
    void inverse(std::complex<double>* in, double* out) const; // clobbers in (c2r)

  private:
    int nx_;
    int ny_;
    double inv_n_;
    fftw_plan fwd_ = nullptr;
    fftw_plan inv_ = nullptr;
};

} // namespace pat::detail
