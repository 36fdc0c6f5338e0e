#include "pat/forward.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "fft.hpp"

namespace pat {

using detail::ComplexBuffer;
using detail::FftPlan;
using detail::RealBuffer;

SpectralPlan::SpectralPlan(const ImageGrid& grid, double c0_mm_per_us, PlanOptions opts)
    : grid_(grid), c0_(c0_mm_per_us), threads_(opts.threads) {
    require(c0_ > 0.0, ErrorKind::invalid_argument, "sound speed must be positive");
    require(threads_ >= 1, ErrorKind::invalid_argument, "thread count must be >= 1");

    const int nx = grid_.nx, ny = grid_.ny;
    const double two_pi = 2.0 * std::numbers::pi;

    // Angular spatial frequency of DFT bin (ix, iy), both signs (rad/mm).
    auto wrapped = [](int i, int n, double d) {
        int f = (i <= n / 2) ? i : i - n;
        return 2.0 * std::numbers::pi * f / (n * d);
    };

    omega_.resize(grid_.count());
    for (int iy = 0; iy < ny; ++iy) {
        double ky = wrapped(iy, ny, grid_.dy);
        for (int ix = 0; ix < nx; ++ix) {
            double kx = wrapped(ix, nx, grid_.dx);
            omega_[static_cast<std::size_t>(iy) * nx + ix] = c0_ * std::sqrt(kx * kx + ky * ky);
        }
    }

    const int nxh = nx / 2 + 1;
    omega_half_.resize(static_cast<std::size_t>(nxh) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        double ky = wrapped(iy, ny, grid_.dy);
        for (int ix = 0; ix < nxh; ++ix) {
            double kx = two_pi * ix / (nx * grid_.dx);
            omega_half_[static_cast<std::size_t>(iy) * nxh + ix] = c0_ * std::sqrt(kx * kx + ky * ky);
        }
    }

    fft_ = std::make_unique<FftPlan>(nx, ny, opts.measure_fft);
}

SpectralPlan::~SpectralPlan() = default;

std::size_t forward_scratch_peak_bytes() { return detail::scratch_peak_bytes(); }
void reset_forward_scratch_stats() { detail::reset_scratch_stats(); }

namespace {

void check_field_input(const SpectralPlan& plan, const Image& x, const char* what) {
    require(x.grid() == plan.grid(), ErrorKind::dimension_mismatch,
            std::string(what) + ": image grid does not match plan grid");
    require(x.all_finite(), ErrorKind::numeric, std::string(what) + ": non-finite input");
}

// cos(omega * t_i) over the half spectrum for consecutive time indices,
// via the three-term recurrence cos(w(t+dt)) = 2cos(w dt)cos(wt) - cos(w(t-dt)),
// reseeded with direct cosines every `reseed` steps to bound drift (~1e-11
// over paper-scale runs). All operators consume identical ladder values, so
// adjoint identities are unaffected by the drift.
class CosineLadder {
  public:
    CosineLadder(const std::vector<double>& omega_half, double dt, int first_index)
        : w_(omega_half), dt_(dt), cur_(std::make_unique<RealBuffer>(w_.size())),
          prev_(std::make_unique<RealBuffer>(w_.size())), next_(std::make_unique<RealBuffer>(w_.size())),
          step_(std::make_unique<RealBuffer>(w_.size())) {
        for (std::size_t j = 0; j < w_.size(); ++j) (*step_)[j] = 2.0 * std::cos(w_[j] * dt_);
        seed(first_index);
    }

    // Filter for time index i (t = dt*(i+1)); i must equal the previous call's
    // index or follow it by one.
    const double* at(int i) {
        if (i == idx_) return cur_->data();
        if (i - seed_idx_ >= reseed_) {
            seed(i);
            return cur_->data();
        }
        const double* s = step_->data();
        const double* c = cur_->data();
        const double* p = prev_->data();
        double* n = next_->data();
        for (std::size_t j = 0; j < w_.size(); ++j) n[j] = s[j] * c[j] - p[j];
        std::swap(prev_, cur_);
        std::swap(cur_, next_);
        idx_ = i;
        return cur_->data();
    }

  private:
    void seed(int i) {
        double t_cur = dt_ * (i + 1);
        double t_prev = dt_ * i;
        for (std::size_t j = 0; j < w_.size(); ++j) (*cur_)[j] = std::cos(w_[j] * t_cur);
        for (std::size_t j = 0; j < w_.size(); ++j) (*prev_)[j] = std::cos(w_[j] * t_prev);
        idx_ = i;
        seed_idx_ = i;
    }

    const std::vector<double>& w_;
    double dt_;
    std::unique_ptr<RealBuffer> cur_, prev_, next_, step_;
    int idx_ = 0;
    int seed_idx_ = 0;
    static constexpr int reseed_ = 32;
};

// Static chunking of the time loop. Reductions always run in chunk order, so
// results are reproducible for a fixed worker count.
template <typename Fn>
void run_chunked(int m_samples, int threads, Fn&& body) {
    int workers = std::min(threads, m_samples);
    if (workers <= 1) {
        body(0, 0, m_samples);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
        int begin = static_cast<int>(static_cast<long long>(m_samples) * w / workers);
        int end = static_cast<int>(static_cast<long long>(m_samples) * (w + 1) / workers);
        pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
    }
    body(0, 0, static_cast<int>(static_cast<long long>(m_samples) / workers));
    for (auto& t : pool) t.join();
}

} // namespace

Image propagate(const SpectralPlan& plan, const Image& p0, double t_us) {
    check_field_input(plan, p0, "propagate");
    require(t_us >= 0.0, ErrorKind::invalid_argument, "propagate: t must be >= 0");

    const FftPlan& fft = plan.fft();
    RealBuffer field(fft.real_count());
    ComplexBuffer spec(fft.spec_count());
    std::copy(p0.data(), p0.data() + p0.size(), field.data());
    fft.forward(field.data(), spec.data());

    const std::vector<double>& w = plan.omega_half();
    for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= std::cos(w[j] * t_us);

    Image out(plan.grid());
    fft.inverse(spec.data(), out.data());
    return out;
}

Measurements apply_H(const SpectralPlan& plan, const SensorArray& sensors, const TimeGrid& times,
                     const Image& p0) {
    check_field_input(plan, p0, "apply_H");
    require(sensors.grid() == plan.grid(), ErrorKind::dimension_mismatch,
            "apply_H: sensor grid does not match plan grid");

    const FftPlan& fft = plan.fft();
    const std::vector<double>& w = plan.omega_half();
    const int L = sensors.count();
    const int M = times.m_samples;
    Measurements meas(L, M, times.dt_us);

    ComplexBuffer p0_spec(fft.spec_count());
    {
        RealBuffer field(fft.real_count());
        std::copy(p0.data(), p0.data() + p0.size(), field.data());
        fft.forward(field.data(), p0_spec.data());
    }

    run_chunked(M, plan.threads(), [&](int /*worker*/, int begin, int end) {
        ComplexBuffer work(fft.spec_count());
        RealBuffer field(fft.real_count());
        CosineLadder ladder(w, times.dt_us, begin);
        for (int i = begin; i < end; ++i) {
            const double* filt = ladder.at(i);
            for (std::size_t j = 0; j < work.size(); ++j) work[j] = p0_spec[j] * filt[j];
            fft.inverse(work.data(), field.data());
            for (int s = 0; s < L; ++s) meas.at(s, i) = field[sensors.flat_index(s)];
        }
    });
    return meas;
}

Image apply_Ht(const SpectralPlan& plan, const SensorArray& sensors, const TimeGrid& times,
               const Measurements& meas) {
    require(sensors.grid() == plan.grid(), ErrorKind::dimension_mismatch,
            "apply_Ht: sensor grid does not match plan grid");
    require(meas.l_sensors() == sensors.count() && meas.m_samples() == times.m_samples,
            ErrorKind::dimension_mismatch, "apply_Ht: measurement shape does not match sensors/times");
    require(meas.all_finite(), ErrorKind::numeric, "apply_Ht: non-finite input");

    const FftPlan& fft = plan.fft();
    const std::vector<double>& w = plan.omega_half();
    const int L = sensors.count();
    const int M = times.m_samples;
    const int workers = std::min(plan.threads(), M);

    std::vector<std::unique_ptr<ComplexBuffer>> partial(workers);
    run_chunked(M, plan.threads(), [&](int worker, int begin, int end) {
        partial[worker] = std::make_unique<ComplexBuffer>(fft.spec_count());
        ComplexBuffer& acc = *partial[worker];
        ComplexBuffer work(fft.spec_count());
        RealBuffer field(fft.real_count()); // stays zero except sensor pixels
        CosineLadder ladder(w, times.dt_us, begin);
        for (int i = begin; i < end; ++i) {
            for (int s = 0; s < L; ++s) field[sensors.flat_index(s)] = meas.at(s, i);
            fft.forward(field.data(), work.data());
            const double* filt = ladder.at(i);
            for (std::size_t j = 0; j < work.size(); ++j) acc[j] += work[j] * filt[j];
        }
    });

    ComplexBuffer& acc = *partial[0];
    for (int c = 1; c < workers; ++c)
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += (*partial[c])[j];

    Image out(plan.grid());
    fft.inverse(acc.data(), out.data());
    return out;
}

Image apply_HtH(const SpectralPlan& plan, const SensorArray& sensors, const TimeGrid& times,
                const Image& v) {
    check_field_input(plan, v, "apply_HtH");
    require(sensors.grid() == plan.grid(), ErrorKind::dimension_mismatch,
            "apply_HtH: sensor grid does not match plan grid");

    const FftPlan& fft = plan.fft();
    const std::vector<double>& w = plan.omega_half();
    const int L = sensors.count();
    const int M = times.m_samples;
    const int workers = std::min(plan.threads(), M);

    ComplexBuffer v_spec(fft.spec_count());
    {
        RealBuffer field(fft.real_count());
        std::copy(v.data(), v.data() + v.size(), field.data());
        fft.forward(field.data(), v_spec.data());
    }

    std::vector<std::unique_ptr<ComplexBuffer>> partial(workers);
    run_chunked(M, plan.threads(), [&](int worker, int begin, int end) {
        partial[worker] = std::make_unique<ComplexBuffer>(fft.spec_count());
        ComplexBuffer& acc = *partial[worker];
        ComplexBuffer work(fft.spec_count());
        RealBuffer field(fft.real_count());
        RealBuffer masked(fft.real_count()); // zero except sensor pixels
        // cosine filters derived per step from omega; caching all M of them
        // would need O(M*N) memory
        CosineLadder ladder(w, times.dt_us, begin);
        for (int i = begin; i < end; ++i) {
            const double* filt = ladder.at(i);
            for (std::size_t j = 0; j < work.size(); ++j) work[j] = v_spec[j] * filt[j];
            fft.inverse(work.data(), field.data());
            for (int s = 0; s < L; ++s) {
                std::size_t idx = sensors.flat_index(s);
                masked[idx] = field[idx];
            }
            fft.forward(masked.data(), work.data());
            for (std::size_t j = 0; j < work.size(); ++j) acc[j] += work[j] * filt[j];
        }
    });

    ComplexBuffer& acc = *partial[0];
    for (int c = 1; c < workers; ++c)
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += (*partial[c])[j];

    Image out(plan.grid());
    fft.inverse(acc.data(), out.data());
    return out;
}

Measurements simulate_data(const SpectralPlan& plan, const SensorArray& sensors,
                           const TimeGrid& times, const Image& phantom,
                           std::optional<double> snr_db, std::uint64_t seed) {
    Measurements clean = apply_H(plan, sensors, times, phantom);
    if (!snr_db) return clean;
    require(std::isfinite(*snr_db), ErrorKind::invalid_argument, "SNR must be finite");

    double clean_norm = std::sqrt(squared_norm(clean));
    require(clean_norm > 0.0, ErrorKind::degenerate,
            "simulate_data: zero clean signal, finite SNR is undefined");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> raw(clean.size());
    double raw_norm2 = 0.0;
    for (double& r : raw) {
        r = gauss(rng);
        raw_norm2 += r * r;
    }
    // ||clean|| / ||noise|| == 10^(snr/20) exactly up to roundoff
    double target_ratio = std::pow(10.0, *snr_db / 20.0);
    double s = clean_norm / (target_ratio * std::sqrt(raw_norm2));
    Measurements out = clean;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += s * raw[i];
    return out;
}

} // namespace pat
