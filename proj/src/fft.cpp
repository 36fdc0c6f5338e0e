#include "fft.hpp"

#include <atomic>
#include <mutex>

namespace pat::detail {

namespace {

std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};

// FFTW planning is not thread-safe; executions are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

void scratch_account_alloc(std::size_t bytes) {
    std::size_t now = g_current.fetch_add(bytes) + bytes;
    std::size_t peak = g_peak.load();
    while (now > peak && !g_peak.compare_exchange_weak(peak, now)) {
    }
}

void scratch_account_free(std::size_t bytes) { g_current.fetch_sub(bytes); }
std::size_t scratch_peak_bytes() { return g_peak.load(); }
std::size_t scratch_current_bytes() { return g_current.load(); }
void reset_scratch_stats() { g_peak.store(g_current.load()); }

FftPlan::FftPlan(int nx, int ny, bool measure) : nx_(nx), ny_(ny), inv_n_(1.0 / (double(nx) * ny)) {
    unsigned flags = measure ? FFTW_MEASURE : FFTW_ESTIMATE;
    // Plan on throwaway buffers; new-array execution requires matching
    // alignment, which fftw_malloc guarantees for all our scratch.
    double* r = static_cast<double*>(fftw_malloc(sizeof(double) * real_count()));
    fftw_complex* c = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spec_count()));
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_r2c_2d(ny_, nx_, r, c, flags);
        inv_ = fftw_plan_dft_c2r_2d(ny_, nx_, c, r, flags);
    }
    fftw_free(c);
    fftw_free(r);
}

FftPlan::~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
}

void FftPlan::forward(double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(fwd_, in, reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::inverse(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(inv_, reinterpret_cast<fftw_complex*>(in), out);
    for (std::size_t i = 0; i < real_count(); ++i) out[i] *= inv_n_;
}

} // namespace pat::detail
