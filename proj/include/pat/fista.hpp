#pragma once

#include <optional>

#include "pat/solver.hpp"

namespace pat {

struct FistaConfig {
    double lambda_tv = 0.0;
    int max_iters = 2000;
    /// Gradient-Lipschitz constant of ||p_m - Hx||^2 (i.e. 2*lambda_max(H^T H));
    /// nullopt = estimate by power iteration with a 1.05 safety factor.
    std::optional<double> lipschitz;
    int power_iters = 30;
    int tv_inner_iters = 20; // dual-projection steps per prox call
    bool nonneg = true;
    bool restart = true; // adaptive momentum restart on objective increase
    double rel_tol = 1e-6;

    void validate() const;
};

/// Largest-eigenvalue estimate of H^T H by power iteration (Rayleigh
/// quotient; monotone non-decreasing in iters). Deterministic per seed.
double estimate_lipschitz(const SpectralPlan& plan, const SensorArray& sensors,
                          const TimeGrid& times, int iters, std::uint64_t seed = 0);

/// Isotropic first-order TV with forward differences, replicate boundary
/// (the convention of the proximal solver below). Requires dx == dy.
double tv_value(const Image& x);

/// argmin_x 1/2 ||x - b||^2 + weight * tv_value(x), by dual projection.
Image tv_prox(const Image& b, double weight, int iters);

/// FISTA on ||p_m - Hx||^2 + lambda_tv * TV(x) with optional nonnegativity
/// projection. Aborts with a numeric error if the objective grows 10x from
/// its initial value (bad Lipschitz constant).
std::pair<Image, SolveReport> fista_tv_solve(const ReconProblem& prob, const FistaConfig& cfg);

} // namespace pat
