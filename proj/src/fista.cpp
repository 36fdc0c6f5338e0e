#include "pat/fista.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace pat {

void FistaConfig::validate() const {
    require(lambda_tv >= 0.0, ErrorKind::invalid_argument, "lambda_tv must be >= 0");
    require(max_iters >= 1, ErrorKind::invalid_argument, "max_iters must be >= 1");
    require(!lipschitz || *lipschitz > 0.0, ErrorKind::invalid_argument, "lipschitz must be > 0");
    require(power_iters >= 1 && tv_inner_iters >= 1, ErrorKind::invalid_argument,
            "iteration counts must be >= 1");
    require(rel_tol > 0.0, ErrorKind::invalid_argument, "rel_tol must be positive");
}

double estimate_lipschitz(const SpectralPlan& plan, const SensorArray& sensors,
                          const TimeGrid& times, int iters, std::uint64_t seed) {
    require(iters >= 1, ErrorKind::invalid_argument, "power iteration needs iters >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Image v(plan.grid());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = u(rng);
    scale(v, 1.0 / norm(v));

    double eig = 0.0;
    for (int k = 0; k < iters; ++k) {
        Image w = apply_HtH(plan, sensors, times, v);
        eig = dot(v, w); // Rayleigh quotient of the unit iterate
        double wn = norm(w);
        if (wn == 0.0) return 0.0;
        scale(w, 1.0 / wn);
        v = std::move(w);
    }
    return eig;
}

namespace {

// Forward differences with replicate boundary (zero at the far edge), and
// the matching negative-adjoint divergence.
void grad_xy(const Image& u, Image& gx, Image& gy) {
    const int nx = u.nx(), ny = u.ny();
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            gx.at(ix, iy) = ix + 1 < nx ? u.at(ix + 1, iy) - u.at(ix, iy) : 0.0;
            gy.at(ix, iy) = iy + 1 < ny ? u.at(ix, iy + 1) - u.at(ix, iy) : 0.0;
        }
}

void divergence(const Image& px, const Image& py, Image& out) {
    const int nx = px.nx(), ny = px.ny();
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            double dx = px.at(ix, iy);
            if (ix > 0) dx -= px.at(ix - 1, iy);
            if (ix + 1 == nx) dx = -px.at(ix - 1, iy);
            double dy = py.at(ix, iy);
            if (iy > 0) dy -= py.at(ix, iy - 1);
            if (iy + 1 == ny) dy = -py.at(ix, iy - 1);
            out.at(ix, iy) = dx + dy;
        }
}

} // namespace

double tv_value(const Image& x) {
    require(x.grid().dx == x.grid().dy, ErrorKind::invalid_argument,
            "tv_value requires square pixels");
    Image gx(x.grid()), gy(x.grid());
    grad_xy(x, gx, gy);
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        s += std::sqrt(gx[j] * gx[j] + gy[j] * gy[j]);
    return s / x.grid().dx;
}

Image tv_prox(const Image& b, double weight, int iters) {
    require(weight >= 0.0, ErrorKind::invalid_argument, "tv weight must be >= 0");
    if (weight == 0.0) return b;
    require(b.grid().dx == b.grid().dy, ErrorKind::invalid_argument,
            "tv_prox requires square pixels");

    // tv_value carries a 1/h factor; fold it into the dual weight
    const double theta = weight / b.grid().dx;
    const double tau = 0.249;

    Image px(b.grid()), py(b.grid());
    Image div_p(b.grid()), work(b.grid()), gx(b.grid()), gy(b.grid());
    for (int it = 0; it < iters; ++it) {
        divergence(px, py, div_p);
        for (std::size_t j = 0; j < work.size(); ++j) work[j] = div_p[j] - b[j] / theta;
        grad_xy(work, gx, gy);
        for (std::size_t j = 0; j < px.size(); ++j) {
            double mag = std::sqrt(gx[j] * gx[j] + gy[j] * gy[j]);
            double denom = 1.0 + tau * mag;
            px[j] = (px[j] + tau * gx[j]) / denom;
            py[j] = (py[j] + tau * gy[j]) / denom;
        }
    }
    divergence(px, py, div_p);
    Image out = b;
    axpy(-theta, div_p, out);
    return out;
}

std::pair<Image, SolveReport> fista_tv_solve(const ReconProblem& prob, const FistaConfig& cfg) {
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    double lip = cfg.lipschitz
                     ? *cfg.lipschitz
                     : 2.0 * 1.05 *
                           estimate_lipschitz(prob.plan(), prob.sensors(), prob.times(),
                                              cfg.power_iters);
    require(lip > 0.0, ErrorKind::numeric, "fista: operator norm estimate is zero");
    const double step = 1.0 / lip;

    SolveReport report;
    report.method = "fista-tv";
    report.params = {{"lambda_tv", cfg.lambda_tv}, {"lipschitz", lip},
                     {"tv_inner_iters", cfg.tv_inner_iters}, {"nonneg", cfg.nonneg},
                     {"restart", cfg.restart}, {"max_iters", cfg.max_iters},
                     {"rel_tol", cfg.rel_tol}};

    auto objective = [&](const Image& x) {
        double f = prob.data_misfit(x);
        if (cfg.lambda_tv > 0.0) f += cfg.lambda_tv * tv_value(x);
        return f;
    };

    Image x_prev(prob.plan().grid());
    Image y = x_prev;
    double theta = 1.0;
    double obj_prev = objective(x_prev);
    const double obj_bound = 10.0 * std::max(obj_prev, std::numeric_limits<double>::min());
    report.iterations.push_back({0, -1.0, 0, obj_prev, 0.0, 0, 0.0, elapsed()});

    for (int k = 1; k <= cfg.max_iters; ++k) {
        Image grad = apply_HtH(prob.plan(), prob.sensors(), prob.times(), y);
        axpy(-1.0, prob.ht_pm(), grad);
        Image z = lincomb(1.0, y, -2.0 * step, grad);
        Image x = cfg.lambda_tv > 0.0 ? tv_prox(z, cfg.lambda_tv * step, cfg.tv_inner_iters)
                                      : std::move(z);
        if (cfg.nonneg)
            for (std::size_t j = 0; j < x.size(); ++j)
                if (x[j] < 0.0) x[j] = 0.0;

        double obj = objective(x);
        if (obj > obj_bound)
            throw Error(ErrorKind::numeric,
                        "fista diverged: objective " + std::to_string(obj) + " vs initial " +
                            std::to_string(obj_prev) + "; Lipschitz constant likely too small");

        bool restarted = cfg.restart && obj > obj_prev;
        double theta_next = restarted ? 1.0 : 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        double momentum = restarted ? 0.0 : (theta - 1.0) / theta_next;
        y = lincomb(1.0 + momentum, x, -momentum, x_prev);

        double dn = 0.0, xn = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            double d = x[j] - x_prev[j];
            dn += d * d;
            xn += x_prev[j] * x_prev[j];
        }
        double r = xn == 0.0 ? (dn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                             : std::sqrt(dn / xn);
        report.iterations.push_back({0, -1.0, k, obj, step, cfg.tv_inner_iters, r, elapsed()});

        x_prev = std::move(x);
        obj_prev = obj;
        theta = theta_next;
        if (r < cfg.rel_tol) break;
    }
    report.total_seconds = elapsed();
    return {std::move(x_prev), std::move(report)};
}

} // namespace pat
