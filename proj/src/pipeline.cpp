#include "pat/pipeline.hpp"

#include <chrono>

namespace pat {

Workbench::Workbench(const ExperimentConfig& cfg)
    : grid_(cfg.geometry.comp_px, cfg.geometry.comp_px, cfg.geometry.dx_mm, cfg.geometry.dx_mm),
      times_(cfg.timing.m_samples, cfg.timing.dt_us) {
    cfg.validate();
    int threads = cfg.deterministic ? 1 : cfg.threads;
    plan_ = std::make_unique<SpectralPlan>(
        grid_, cfg.c0, PlanOptions{threads, /*measure_fft=*/!cfg.deterministic});
    double cx = (grid_.nx / 2) * grid_.dx;
    double cy = (grid_.ny / 2) * grid_.dy;
    sensors_ = std::make_unique<SensorArray>(
        make_circular_array(grid_, cx, cy, cfg.geometry.radius_mm, cfg.geometry.l_sensors));
    imaging_region_ = centered_region(grid_, cfg.geometry.img_px);
}

Image phantom_for(const ExperimentConfig& cfg, const Workbench& bench) {
    return make_phantom(cfg.phantom, bench.grid());
}

Measurements simulate(const ExperimentConfig& cfg, const Workbench& bench, const Image& phantom) {
    if (!cfg.fine_grid)
        return simulate_data(bench.plan(), bench.sensors(), bench.times(), phantom, cfg.snr_db,
                             cfg.seed);

    // Generate on a 2x finer grid: same physical extent and sensor circle,
    // phantom regenerated at doubled resolution.
    ExperimentConfig fine = cfg;
    fine.fine_grid = false;
    fine.geometry.comp_px *= 2;
    fine.geometry.img_px *= 2;
    fine.geometry.dx_mm *= 0.5;
    fine.phantom.size_px *= 2;
    require(fine.phantom.kind != PhantomSpec::Kind::file, ErrorKind::config,
            "fine-grid simulation requires a procedural phantom");
    Workbench fine_bench(fine);
    Image fine_phantom = phantom_for(fine, fine_bench);
    return simulate_data(fine_bench.plan(), fine_bench.sensors(), fine_bench.times(), fine_phantom,
                         cfg.snr_db, cfg.seed);
}

double imaging_ssim(const Workbench& bench, const Image& recon, const Image& reference) {
    SsimParams params;
    params.region = bench.imaging_region();
    return ssim(recon, reference, params);
}

namespace {

ReconResult solve_single(const ExperimentConfig& cfg, const ReconProblem& prob, double lambda) {
    const MethodConfig& m = cfg.method;
    ReconResult out;
    out.lambda_used = lambda;

    if (m.name == "fista-tv") {
        FistaConfig fc = m.fista;
        fc.lambda_tv = lambda;
        auto [img, report] = fista_tv_solve(prob, fc);
        out.image = std::move(img);
        out.report = std::move(report);
    } else if (m.name == "tikhonov") {
        SolverConfig sc = m.solver;
        sc.lambda = lambda;
        sc.lambda_p = 0.0;
        SolveReport report;
        report.method = "tikhonov";
        auto t0 = std::chrono::steady_clock::now();
        out.image = quad_init(prob, sc, &report);
        report.total_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.params = {{"lambda", lambda}, {"alpha", m.reg.alpha}, {"order", m.reg.order}};
        out.report = std::move(report);
    } else {
        SolverConfig sc = m.solver;
        sc.lambda = lambda;
        sc.lambda_p = lambda * m.lambda_p_factor;
        GncSchedule sched{m.reg.q, m.n_s};
        auto [img, report] = gnc_solve(prob, sc, sched);
        report.params = {{"lambda", lambda},       {"lambda_p", sc.lambda_p},
                         {"alpha", m.reg.alpha},   {"epsilon", m.reg.epsilon},
                         {"q", m.reg.q},           {"n_s", m.n_s},
                         {"order", m.reg.order},   {"form", m.reg.form},
                         {"eps_cg", sc.eps_cg},    {"eps_o", sc.eps_o},
                         {"eps_s", sc.eps_s},      {"rho", sc.rho}};
        out.image = std::move(img);
        out.report = std::move(report);
    }
    return out;
}

} // namespace

ReconResult reconstruct(const ExperimentConfig& cfg, const Workbench& bench,
                        const Measurements& meas, const Image* ground_truth) {
    cfg.validate();
    require(meas.l_sensors() == bench.sensors().count() &&
                meas.m_samples() == bench.times().m_samples,
            ErrorKind::dimension_mismatch, "measurements do not match the configured geometry");

    RegParams reg = cfg.method.reg;
    if (cfg.method.name == "tikhonov") reg.q = 1.0;
    ReconProblem prob(bench.plan(), bench.sensors(), bench.times(), meas, reg);

    if (cfg.method.lambda_grid.empty()) return solve_single(cfg, prob, cfg.method.lambda);

    require(ground_truth != nullptr, ErrorKind::config,
            "lambda-grid tuning needs a ground-truth image");

    ReconResult best;
    double best_ssim = -2.0;
    nlohmann::json trials = nlohmann::json::array();
    for (double lambda : cfg.method.lambda_grid) {
        ReconResult r = solve_single(cfg, prob, lambda);
        double score = imaging_ssim(bench, r.image, *ground_truth);
        trials.push_back({{"lambda", lambda}, {"ssim", score}});
        if (score > best_ssim) {
            best_ssim = score;
            best = std::move(r);
        }
    }
    best.tuning = {{"criterion", "ssim"}, {"trials", trials}, {"best_lambda", best.lambda_used}};
    return best;
}

} // namespace pat
