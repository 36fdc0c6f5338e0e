#pragma once

#include <vector>

#include "pat/forward.hpp"
#include "pat/image.hpp"

namespace pat {

/// Small convolution stencil; taps are (offset, coefficient) pairs. Filters
/// are evaluated only where every tap is in range (output 0 elsewhere), so
/// constants are annihilated everywhere, and apply/apply_adjoint form an
/// exact adjoint pair.
struct Stencil {
    struct Tap {
        int ox;
        int oy;
        double c;
    };
    std::vector<Tap> taps;
};

/// Derivative filter bank: order 1 holds d/dx, d/dy; order 2 holds d2/dx2,
/// d2/dy2 and sqrt(2)*d2/dxdy. Spacing is baked into the coefficients.
class DerivativeBank {
  public:
    DerivativeBank(int order, double dx, double dy);

    int order() const { return order_; }
    std::size_t count() const { return stencils_.size(); }
    const Stencil& filter(std::size_t i) const { return stencils_[i]; }

    void apply(std::size_t i, const Image& in, Image& out) const;
    void apply_adjoint(std::size_t i, const Image& in, Image& out) const;

    /// sum_i (D_i x)^2, accumulated pointwise.
    Image derivative_energy(const Image& x) const;

  private:
    int order_;
    std::vector<Stencil> stencils_;
};

struct RegParams {
    double alpha = 0.5;    // relative penalization of intensity vs derivatives
    double epsilon = 1e-6; // smoothing floor
    double q = 0.25;       // sparsity index; q = 1 only for the quadratic path
    int form = 1;          // 1 or 2
    int order = 2;         // derivative order

    void validate() const;
    RegParams with_q(double q_new) const {
        RegParams p = *this;
        p.q = q_new;
        return p;
    }
};

/// Diagonal factors of A^(x): w_intensity/w_deriv are W (form 1, identical)
/// or the pair Wbar/What (form 2); n marks negative pixels for the
/// positivity penalty, 0.5 on exact zeros.
struct DiagonalWeights {
    Image w_intensity;
    Image w_deriv;
    Image n;
};

double eval_Rh1(const Image& x, const RegParams& p);
double eval_Rh2(const Image& x, const RegParams& p);
double eval_regularizer(const Image& x, const RegParams& p); // dispatch on p.form
double eval_tikhonov(const Image& x, int order);
double eval_tv_smooth(const Image& x, double epsilon, int order);

DiagonalWeights build_weights(const Image& x, const RegParams& p);

struct AxContext {
    const SpectralPlan& plan;
    const SensorArray& sensors;
    const TimeGrid& times;
    const DerivativeBank& bank;
    double lambda = 0.0;
    double lambda_p = 0.0;
    double alpha = 0.5;
};

/// A^(x) v = H^T H v + lambda*alpha*(w .* v)
///         + lambda*(1-alpha) * sum_i D_i^T (w .* D_i v) + lambda_p*(n .* v),
/// linear and symmetric in v for fixed weights.
Image apply_Ax(const DiagonalWeights& weights, const Image& v, const AxContext& ctx);

} // namespace pat
