#include "pat/regularizers.hpp"

#include <algorithm>
#include <cmath>

namespace pat {

namespace {

struct TapBounds {
    int x_lo, x_hi, y_lo, y_hi; // valid evaluation region [lo, hi)
};

TapBounds valid_region(const Stencil& st, int nx, int ny) {
    int min_ox = 0, max_ox = 0, min_oy = 0, max_oy = 0;
    for (const auto& t : st.taps) {
        min_ox = std::min(min_ox, t.ox);
        max_ox = std::max(max_ox, t.ox);
        min_oy = std::min(min_oy, t.oy);
        max_oy = std::max(max_oy, t.oy);
    }
    return {-min_ox, nx - max_ox, -min_oy, ny - max_oy};
}

} // namespace

DerivativeBank::DerivativeBank(int order, double dx, double dy) : order_(order) {
    require(order == 1 || order == 2, ErrorKind::invalid_argument, "derivative order must be 1 or 2");
    require(dx > 0 && dy > 0, ErrorKind::invalid_argument, "spacing must be positive");
    if (order == 1) {
        stencils_.push_back({{{0, 0, -1.0 / dx}, {1, 0, 1.0 / dx}}});
        stencils_.push_back({{{0, 0, -1.0 / dy}, {0, 1, 1.0 / dy}}});
    } else {
        double sx = 1.0 / (dx * dx), sy = 1.0 / (dy * dy);
        double sxy = std::sqrt(2.0) / (dx * dy);
        stencils_.push_back({{{-1, 0, sx}, {0, 0, -2.0 * sx}, {1, 0, sx}}});
        stencils_.push_back({{{0, -1, sy}, {0, 0, -2.0 * sy}, {0, 1, sy}}});
        stencils_.push_back({{{0, 0, sxy}, {1, 0, -sxy}, {0, 1, -sxy}, {1, 1, sxy}}});
    }
}

void DerivativeBank::apply(std::size_t i, const Image& in, Image& out) const {
    require_same_grid(in, out);
    const Stencil& st = stencils_[i];
    const int nx = in.nx(), ny = in.ny();
    TapBounds b = valid_region(st, nx, ny);
    out.fill(0.0);
    for (int iy = b.y_lo; iy < b.y_hi; ++iy) {
        for (int ix = b.x_lo; ix < b.x_hi; ++ix) {
            double acc = 0.0;
            for (const auto& t : st.taps) acc += t.c * in.at(ix + t.ox, iy + t.oy);
            out.at(ix, iy) = acc;
        }
    }
}

void DerivativeBank::apply_adjoint(std::size_t i, const Image& in, Image& out) const {
    require_same_grid(in, out);
    const Stencil& st = stencils_[i];
    const int nx = in.nx(), ny = in.ny();
    TapBounds b = valid_region(st, nx, ny);
    out.fill(0.0);
    for (int iy = b.y_lo; iy < b.y_hi; ++iy)
        for (int ix = b.x_lo; ix < b.x_hi; ++ix)
            for (const auto& t : st.taps) out.at(ix + t.ox, iy + t.oy) += t.c * in.at(ix, iy);
}

Image DerivativeBank::derivative_energy(const Image& x) const {
    Image energy(x.grid());
    Image d(x.grid());
    for (std::size_t i = 0; i < stencils_.size(); ++i) {
        apply(i, x, d);
        for (std::size_t j = 0; j < energy.size(); ++j) energy[j] += d[j] * d[j];
    }
    return energy;
}

void RegParams::validate() const {
    require(alpha > 0.0 && alpha < 1.0, ErrorKind::invalid_argument, "alpha must lie in (0,1)");
    require(epsilon > 0.0, ErrorKind::invalid_argument, "epsilon must be positive");
    require((q > 0.0 && q <= 0.5) || q == 1.0, ErrorKind::invalid_argument,
            "q must lie in (0, 0.5] (q = 1 reserved for the quadratic path)");
    require(form == 1 || form == 2, ErrorKind::invalid_argument, "form must be 1 or 2");
    require(order == 1 || order == 2, ErrorKind::invalid_argument, "order must be 1 or 2");
}

double eval_Rh1(const Image& x, const RegParams& p) {
    p.validate();
    require(p.form == 1, ErrorKind::invalid_argument, "eval_Rh1 needs form 1 params");
    DerivativeBank bank(p.order, x.grid().dx, x.grid().dy);
    Image energy = bank.derivative_energy(x);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        sum += std::pow(p.epsilon + p.alpha * x[j] * x[j] + (1.0 - p.alpha) * energy[j], p.q);
    return sum;
}

double eval_Rh2(const Image& x, const RegParams& p) {
    p.validate();
    require(p.form == 2, ErrorKind::invalid_argument, "eval_Rh2 needs form 2 params");
    DerivativeBank bank(p.order, x.grid().dx, x.grid().dy);
    Image energy = bank.derivative_energy(x);
    double sum_i = 0.0, sum_d = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        sum_i += std::pow(p.epsilon + x[j] * x[j], p.q);
        sum_d += std::pow(p.epsilon + energy[j], p.q);
    }
    return p.alpha * sum_i + (1.0 - p.alpha) * sum_d;
}

double eval_regularizer(const Image& x, const RegParams& p) {
    return p.form == 1 ? eval_Rh1(x, p) : eval_Rh2(x, p);
}

double eval_tikhonov(const Image& x, int order) {
    DerivativeBank bank(order, x.grid().dx, x.grid().dy);
    Image energy = bank.derivative_energy(x);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) sum += energy[j];
    return sum;
}

double eval_tv_smooth(const Image& x, double epsilon, int order) {
    require(epsilon > 0.0, ErrorKind::invalid_argument, "epsilon must be positive");
    DerivativeBank bank(order, x.grid().dx, x.grid().dy);
    Image energy = bank.derivative_energy(x);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) sum += std::sqrt(epsilon + energy[j]);
    return sum;
}

DiagonalWeights build_weights(const Image& x, const RegParams& p) {
    p.validate();
    DerivativeBank bank(p.order, x.grid().dx, x.grid().dy);
    Image energy = bank.derivative_energy(x);

    DiagonalWeights out{Image(x.grid()), Image(x.grid()), Image(x.grid())};
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (p.form == 1) {
            double w = p.q * std::pow(p.epsilon + p.alpha * x[j] * x[j] + (1.0 - p.alpha) * energy[j],
                                      p.q - 1.0);
            out.w_intensity[j] = w;
            out.w_deriv[j] = w;
        } else {
            out.w_intensity[j] = p.q * std::pow(p.epsilon + x[j] * x[j], p.q - 1.0);
            out.w_deriv[j] = p.q * std::pow(p.epsilon + energy[j], p.q - 1.0);
        }
        double sign = x[j] > 0.0 ? 1.0 : (x[j] < 0.0 ? -1.0 : 0.0);
        out.n[j] = 0.5 * (1.0 - sign);
    }
    return out;
}

Image apply_Ax(const DiagonalWeights& weights, const Image& v, const AxContext& ctx) {
    require_same_grid(weights.w_intensity, v);
    Image out = apply_HtH(ctx.plan, ctx.sensors, ctx.times, v);

    const double li = ctx.lambda * ctx.alpha;
    const double ld = ctx.lambda * (1.0 - ctx.alpha);
    for (std::size_t j = 0; j < v.size(); ++j)
        out[j] += li * weights.w_intensity[j] * v[j] + ctx.lambda_p * weights.n[j] * v[j];

    if (ld != 0.0) {
        Image d(v.grid()), back(v.grid());
        for (std::size_t i = 0; i < ctx.bank.count(); ++i) {
            ctx.bank.apply(i, v, d);
            for (std::size_t j = 0; j < d.size(); ++j) d[j] *= weights.w_deriv[j];
            ctx.bank.apply_adjoint(i, d, back);
            axpy(ld, back, out);
        }
    }
    return out;
}

} // namespace pat
