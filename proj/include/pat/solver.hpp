#pragma once

#include <functional>
#include <utility>

#include "pat/forward.hpp"
#include "pat/regularizers.hpp"
#include "pat/report.hpp"

namespace pat {

struct SolverConfig {
    double lambda = 0.0;   // regularization weight
    double lambda_p = 0.0; // positivity weight (10*lambda in the presets)
    double eps_s = 1e-6;   // line-search sufficient-decrease tolerance
    double eps_cg = 1e-6;  // CG relative-residual tolerance
    double eps_o = 1e-6;   // outer relative-change tolerance
    double rho = 0.5;      // backtracking factor
    int max_outer = 200;
    int max_cg = 200;
    int max_ls = 30;

    void validate() const;
};

/// Continuation schedule q_m = 0.5 - m*(0.5 - q_final)/n_s, m = 0..n_s.
struct GncSchedule {
    double q_final = 0.25;
    int n_s = 10;

    void validate() const;
    int stage_count() const { return n_s + 1; }
    double stage_q(int m) const { return 0.5 - m * (0.5 - q_final) / n_s; }
};

/// Measurement-fitting problem bundle: the matrix-free operators plus the
/// cached back-projected data H^T p_m (constant across all iterations).
class ReconProblem {
  public:
    ReconProblem(const SpectralPlan& plan, const SensorArray& sensors, const TimeGrid& times,
                 Measurements data, RegParams reg);

    const SpectralPlan& plan() const { return plan_; }
    const SensorArray& sensors() const { return sensors_; }
    const TimeGrid& times() const { return times_; }
    const Measurements& data() const { return data_; }
    const RegParams& reg() const { return reg_; }
    const DerivativeBank& bank() const { return bank_; }
    const Image& ht_pm() const { return ht_pm_; }
    double pm_norm2() const { return pm_norm2_; }

    /// ||p_m - H x||^2
    double data_misfit(const Image& x) const;

    AxContext ax_context(double lambda, double lambda_p) const {
        return AxContext{plan_, sensors_, times_, bank_, lambda, lambda_p, reg_.alpha};
    }

  private:
    const SpectralPlan& plan_;
    const SensorArray& sensors_;
    const TimeGrid& times_;
    Measurements data_;
    RegParams reg_;
    DerivativeBank bank_;
    Image ht_pm_;
    double pm_norm2_;
};

/// Full cost ||p_m - Hx||^2 + lambda*R_{h,form}(x, q) + lambda_p*||P^-(x)||^2.
double eval_cost(const Image& x, const ReconProblem& prob, const SolverConfig& cfg, double q);

/// A^(x) x - H^T p_m. Half the true gradient of eval_cost; the scale is
/// absorbed by the line search.
Image eval_grad(const Image& x, const ReconProblem& prob, const SolverConfig& cfg, double q);

using LinearOp = std::function<Image(const Image&)>;

struct CgResult {
    Image x;
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

/// Conjugate gradients for a symmetric PSD operator, started from zero.
/// Throws a numeric error on indefiniteness beyond roundoff.
CgResult cg_solve(const LinearOp& op, const Image& b, double eps_cg, int max_cg);

struct LineSearchResult {
    double beta = 0.0;
    double cost = 0.0;
    bool success = false;
    std::vector<double> betas_tried;
};

/// Backtracking from beta = 1: accept the first beta with
/// J(new) <= (1 - eps_s) * J(current).
LineSearchResult line_search(double j_current, const std::function<double(double)>& trial_cost,
                             double rho, double eps_s, int max_ls);

/// Preconditioned gradient iteration at fixed q (one GNC stage).
std::pair<Image, SolveReport> rr_solve(const Image& x0, const ReconProblem& prob, double q,
                                       const SolverConfig& cfg);

/// Solve [H^T H + lambda*alpha*I + lambda*(1-alpha)*sum_i D_i^T D_i] y = H^T p_m
/// by CG (the q = 1 quadratic problem; no positivity term).
Image quad_init(const ReconProblem& prob, const SolverConfig& cfg, SolveReport* report = nullptr);

/// Graduated non-convexity: quadratic init, then one rr stage per q_m with
/// warm starts. A failed stage returns the previous stage's iterate with the
/// degraded flag set.
std::pair<Image, SolveReport> gnc_solve(const ReconProblem& prob, const SolverConfig& cfg,
                                        const GncSchedule& sched);

} // namespace pat
