#include "pat/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace pat {

namespace {

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

double rel_change(const Image& x_new, const Image& x_old) {
    double dn = 0.0, xn = 0.0;
    for (std::size_t j = 0; j < x_old.size(); ++j) {
        double d = x_new[j] - x_old[j];
        dn += d * d;
        xn += x_old[j] * x_old[j];
    }
    if (xn == 0.0) return dn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(dn / xn);
}

} // namespace

void SolverConfig::validate() const {
    require(lambda >= 0.0 && lambda_p >= 0.0, ErrorKind::invalid_argument,
            "lambda, lambda_p must be >= 0");
    require(eps_s > 0.0 && eps_cg > 0.0 && eps_o > 0.0, ErrorKind::invalid_argument,
            "tolerances must be positive");
    require(rho > 0.0 && rho < 1.0, ErrorKind::invalid_argument, "rho must lie in (0,1)");
    require(max_outer >= 1 && max_cg >= 1 && max_ls >= 1, ErrorKind::invalid_argument,
            "iteration caps must be >= 1");
}

void GncSchedule::validate() const {
    require(q_final > 0.0 && q_final < 0.5, ErrorKind::invalid_argument,
            "q_final must lie in (0, 0.5)");
    require(n_s >= 1, ErrorKind::invalid_argument, "n_s must be >= 1");
}

ReconProblem::ReconProblem(const SpectralPlan& plan, const SensorArray& sensors,
                           const TimeGrid& times, Measurements data, RegParams reg)
    : plan_(plan), sensors_(sensors), times_(times), data_(std::move(data)), reg_(reg),
      bank_(reg.order, plan.grid().dx, plan.grid().dy),
      ht_pm_(apply_Ht(plan, sensors, times, data_)), pm_norm2_(squared_norm(data_)) {
    reg_.validate();
}

double ReconProblem::data_misfit(const Image& x) const {
    Measurements hx = apply_H(plan_, sensors_, times_, x);
    double s = 0.0;
    for (std::size_t i = 0; i < hx.size(); ++i) {
        double d = data_.data()[i] - hx.data()[i];
        s += d * d;
    }
    return s;
}

namespace {

double positivity_penalty(const Image& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < 0.0) s += x[j] * x[j];
    return s;
}

double cost_impl(const Image& x, const ReconProblem& prob, double lambda, double lambda_p,
                 double q) {
    double j = prob.data_misfit(x);
    if (lambda != 0.0) j += lambda * eval_regularizer(x, prob.reg().with_q(q));
    if (lambda_p != 0.0) j += lambda_p * positivity_penalty(x);
    return j;
}

} // namespace

double eval_cost(const Image& x, const ReconProblem& prob, const SolverConfig& cfg, double q) {
    return cost_impl(x, prob, cfg.lambda, cfg.lambda_p, q);
}

Image eval_grad(const Image& x, const ReconProblem& prob, const SolverConfig& cfg, double q) {
    DiagonalWeights weights = build_weights(x, prob.reg().with_q(q));
    Image g = apply_Ax(weights, x, prob.ax_context(cfg.lambda, cfg.lambda_p));
    axpy(-1.0, prob.ht_pm(), g);
    return g;
}

CgResult cg_solve(const LinearOp& op, const Image& b, double eps_cg, int max_cg) {
    require(eps_cg > 0.0 && max_cg >= 1, ErrorKind::invalid_argument, "bad CG parameters");
    CgResult out{Image(b.grid()), 0, 0.0, false};

    double b_norm = norm(b);
    if (b_norm == 0.0) {
        out.converged = true;
        return out;
    }

    Image r = b;
    Image p = b;
    double rs = squared_norm(r);
    for (int k = 0; k < max_cg; ++k) {
        Image ap = op(p);
        double p_ap = dot(p, ap);
        if (p_ap <= 0.0) {
            // tiny negative curvature at roundoff level just means we are done
            double p2 = squared_norm(p);
            if (p_ap < -1e-12 * p2)
                throw Error(ErrorKind::numeric,
                            "CG breakdown: p^T A p = " + std::to_string(p_ap) +
                                " with ||p||^2 = " + std::to_string(p2) + " at iteration " +
                                std::to_string(k));
            break;
        }
        double alpha = rs / p_ap;
        axpy(alpha, p, out.x);
        axpy(-alpha, ap, r);
        out.iterations = k + 1;
        double rs_new = squared_norm(r);
        if (std::sqrt(rs_new) <= eps_cg * b_norm) {
            out.converged = true;
            rs = rs_new;
            break;
        }
        double gamma = rs_new / rs;
        rs = rs_new;
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = r[j] + gamma * p[j];
    }
    out.rel_residual = std::sqrt(rs) / b_norm;
    if (out.rel_residual <= eps_cg) out.converged = true;
    return out;
}

LineSearchResult line_search(double j_current, const std::function<double(double)>& trial_cost,
                             double rho, double eps_s, int max_ls) {
    require(rho > 0.0 && rho < 1.0, ErrorKind::invalid_argument, "rho must lie in (0,1)");
    LineSearchResult out;
    double beta = 1.0;
    for (int trial = 0; trial < max_ls; ++trial) {
        out.betas_tried.push_back(beta);
        double j_new = trial_cost(beta);
        if (j_new <= (1.0 - eps_s) * j_current) {
            out.beta = beta;
            out.cost = j_new;
            out.success = true;
            return out;
        }
        beta *= rho;
    }
    return out;
}

namespace {

struct StageOutcome {
    Image x;
    bool step_limited = false;
};

// One fixed-q stage of the preconditioned gradient iteration, appending
// records to `report`. Uses lambda_p as configured (the GNC stages) or as
// overridden (quadratic paths).
StageOutcome run_stage(const Image& x0, const ReconProblem& prob, double q,
                       const SolverConfig& cfg, int stage, SolveReport& report,
                       clock_t_::time_point t0) {
    StageOutcome out{x0, false};
    Image& x = out.x;
    AxContext ctx = prob.ax_context(cfg.lambda, cfg.lambda_p);

    double j_cur = cost_impl(x, prob, cfg.lambda, cfg.lambda_p, q);
    report.iterations.push_back({stage, q, 0, j_cur, 0.0, 0, 0.0, seconds_since(t0)});

    for (int k = 1; k <= cfg.max_outer; ++k) {
        Image g = eval_grad(x, prob, cfg, q);
        if (squared_norm(g) == 0.0) break; // stationary point

        DiagonalWeights weights = build_weights(x, prob.reg().with_q(q));
        CgResult cg = cg_solve([&](const Image& v) { return apply_Ax(weights, v, ctx); }, g,
                               cfg.eps_cg, cfg.max_cg);

        const Image* dir = &cg.x;
        LineSearchResult ls = line_search(
            j_cur, [&](double b) { return cost_impl(lincomb(1.0, x, -b, *dir), prob, cfg.lambda,
                                                    cfg.lambda_p, q); },
            cfg.rho, cfg.eps_s, cfg.max_ls);
        if (!ls.success) {
            // fall back to the raw gradient direction once
            dir = &g;
            ls = line_search(
                j_cur, [&](double b) { return cost_impl(lincomb(1.0, x, -b, *dir), prob, cfg.lambda,
                                                        cfg.lambda_p, q); },
                cfg.rho, cfg.eps_s, cfg.max_ls);
            if (!ls.success) {
                out.step_limited = true;
                break;
            }
        }

        Image x_new = lincomb(1.0, x, -ls.beta, *dir);
        double r = rel_change(x_new, x);
        report.iterations.push_back({stage, q, k, ls.cost, ls.beta, cg.iterations, r,
                                     seconds_since(t0)});
        x = std::move(x_new);
        j_cur = ls.cost;
        if (r < cfg.eps_o) break;
    }
    return out;
}

DiagonalWeights unit_weights(const ImageGrid& grid) {
    DiagonalWeights w{Image(grid), Image(grid), Image(grid)};
    w.w_intensity.fill(1.0);
    w.w_deriv.fill(1.0);
    return w;
}

} // namespace

std::pair<Image, SolveReport> rr_solve(const Image& x0, const ReconProblem& prob, double q,
                                       const SolverConfig& cfg) {
    cfg.validate();
    require(x0.grid() == prob.plan().grid(), ErrorKind::dimension_mismatch,
            "rr_solve: x0 grid mismatch");
    SolveReport report;
    report.method = prob.reg().form == 1 ? "rr-form1" : "rr-form2";
    auto t0 = clock_t_::now();
    StageOutcome out = run_stage(x0, prob, q, cfg, 0, report, t0);
    report.step_limited = out.step_limited;
    report.total_seconds = seconds_since(t0);
    return {std::move(out.x), std::move(report)};
}

Image quad_init(const ReconProblem& prob, const SolverConfig& cfg, SolveReport* report) {
    cfg.validate();
    auto t0 = clock_t_::now();
    DiagonalWeights w1 = unit_weights(prob.plan().grid());
    AxContext ctx = prob.ax_context(cfg.lambda, 0.0); // Eq-form has no positivity term
    CgResult cg =
        cg_solve([&](const Image& v) { return apply_Ax(w1, v, ctx); }, prob.ht_pm(), cfg.eps_cg,
                 cfg.max_cg);
    if (report) {
        double j = cost_impl(cg.x, prob, cfg.lambda, 0.0, 1.0);
        report->iterations.push_back({-1, 1.0, 0, j, 0.0, cg.iterations, cg.rel_residual,
                                      seconds_since(t0)});
    }
    return std::move(cg.x);
}

std::pair<Image, SolveReport> gnc_solve(const ReconProblem& prob, const SolverConfig& cfg,
                                        const GncSchedule& sched) {
    cfg.validate();
    sched.validate();

    SolveReport report;
    report.method = prob.reg().form == 1 ? "proposed-form1" : "proposed-form2";
    auto t0 = clock_t_::now();

    Image y = quad_init(prob, cfg, &report);
    for (int m = 0; m <= sched.n_s; ++m) {
        double q_m = sched.stage_q(m);
        Image y_prev = y;
        try {
            StageOutcome out = run_stage(y, prob, q_m, cfg, m, report, t0);
            report.step_limited |= out.step_limited;
            y = std::move(out.x);
        } catch (const Error&) {
            report.degraded = true;
            y = std::move(y_prev);
            break;
        }
    }
    report.total_seconds = seconds_since(t0);
    return {std::move(y), std::move(report)};
}

} // namespace pat
