#include "pat/config.hpp"

#include <sstream>

namespace pat {

using nlohmann::json;

const char* version_string() { return "1.0.0"; }

void ExperimentConfig::validate() const {
    phantom.validate();
    require(geometry.comp_px >= 16 && geometry.img_px >= 16, ErrorKind::config,
            "grid sizes must be >= 16");
    require(geometry.img_px <= geometry.comp_px, ErrorKind::config,
            "imaging region larger than computational grid");
    require(geometry.dx_mm > 0.0 && geometry.radius_mm > 0.0, ErrorKind::config,
            "spacing and radius must be positive");
    require(geometry.l_sensors >= 1, ErrorKind::config, "need at least one sensor");
    require(timing.m_samples >= 1 && timing.dt_us > 0.0, ErrorKind::config, "bad time grid");
    require(c0 > 0.0, ErrorKind::config, "sound speed must be positive");
    require(threads >= 1, ErrorKind::config, "threads must be >= 1");
    require(phantom.size_px == geometry.img_px, ErrorKind::config,
            "phantom size must equal the imaging region size");
    method.reg.validate();
    method.solver.validate();
    method.fista.validate();
    require(method.lambda >= 0.0 && method.lambda_p_factor >= 0.0, ErrorKind::config,
            "lambda and the positivity factor must be >= 0");
    require(method.n_s >= 1, ErrorKind::config, "n_s must be >= 1");
    bool known = method.name == "proposed-form1" || method.name == "proposed-form2" ||
                 method.name == "fista-tv" || method.name == "tikhonov";
    require(known, ErrorKind::config, "unknown method: " + method.name);
}

namespace {

template <typename T>
void load(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    require(j.is_object(), ErrorKind::config, "config must be a JSON object");
    int schema = j.value("schema_version", kConfigSchemaVersion);
    require(schema == kConfigSchemaVersion, ErrorKind::config,
            "unsupported config schema version " + std::to_string(schema));

    ExperimentConfig cfg;
    if (j.contains("preset")) cfg = preset(j.at("preset").get<std::string>());

    if (j.contains("phantom")) {
        const json& p = j.at("phantom");
        if (p.contains("kind")) cfg.phantom.kind = phantom_kind_from_string(p.at("kind"));
        load(p, "size_px", cfg.phantom.size_px);
        load(p, "amplitude", cfg.phantom.amplitude);
        load(p, "seed", cfg.phantom.seed);
        load(p, "path", cfg.phantom.path);
    }
    if (j.contains("geometry")) {
        const json& g = j.at("geometry");
        load(g, "comp_px", cfg.geometry.comp_px);
        load(g, "img_px", cfg.geometry.img_px);
        load(g, "dx_mm", cfg.geometry.dx_mm);
        load(g, "radius_mm", cfg.geometry.radius_mm);
        load(g, "l_sensors", cfg.geometry.l_sensors);
        // keep the phantom aligned with the imaging region unless overridden
        if (g.contains("img_px") && !(j.contains("phantom") && j.at("phantom").contains("size_px")))
            cfg.phantom.size_px = cfg.geometry.img_px;
    }
    if (j.contains("timing")) {
        load(j.at("timing"), "m_samples", cfg.timing.m_samples);
        load(j.at("timing"), "dt_us", cfg.timing.dt_us);
    }
    load(j, "c0_mm_per_us", cfg.c0);
    if (j.contains("snr_db") && !j.at("snr_db").is_null()) cfg.snr_db = j.at("snr_db").get<double>();
    load(j, "seed", cfg.seed);
    load(j, "threads", cfg.threads);
    load(j, "deterministic", cfg.deterministic);
    load(j, "fine_grid", cfg.fine_grid);

    if (j.contains("method")) {
        const json& m = j.at("method");
        load(m, "name", cfg.method.name);
        load(m, "lambda", cfg.method.lambda);
        load(m, "lambda_grid", cfg.method.lambda_grid);
        load(m, "lambda_p_factor", cfg.method.lambda_p_factor);
        load(m, "alpha", cfg.method.reg.alpha);
        load(m, "epsilon", cfg.method.reg.epsilon);
        load(m, "q", cfg.method.reg.q);
        load(m, "order", cfg.method.reg.order);
        load(m, "n_s", cfg.method.n_s);
        if (cfg.method.name == "proposed-form1") cfg.method.reg.form = 1;
        if (cfg.method.name == "proposed-form2") cfg.method.reg.form = 2;
        if (m.contains("solver")) {
            const json& s = m.at("solver");
            load(s, "eps_s", cfg.method.solver.eps_s);
            load(s, "eps_cg", cfg.method.solver.eps_cg);
            load(s, "eps_o", cfg.method.solver.eps_o);
            load(s, "rho", cfg.method.solver.rho);
            load(s, "max_outer", cfg.method.solver.max_outer);
            load(s, "max_cg", cfg.method.solver.max_cg);
            load(s, "max_ls", cfg.method.solver.max_ls);
        }
        if (m.contains("fista")) {
            const json& f = m.at("fista");
            load(f, "max_iters", cfg.method.fista.max_iters);
            if (f.contains("lipschitz") && !f.at("lipschitz").is_null())
                cfg.method.fista.lipschitz = f.at("lipschitz").get<double>();
            load(f, "power_iters", cfg.method.fista.power_iters);
            load(f, "tv_inner_iters", cfg.method.fista.tv_inner_iters);
            load(f, "nonneg", cfg.method.fista.nonneg);
            load(f, "restart", cfg.method.fista.restart);
            load(f, "rel_tol", cfg.method.fista.rel_tol);
        }
    }
    cfg.validate();
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["phantom"] = {{"kind", to_string(cfg.phantom.kind)},
                    {"size_px", cfg.phantom.size_px},
                    {"amplitude", cfg.phantom.amplitude},
                    {"seed", cfg.phantom.seed}};
    if (!cfg.phantom.path.empty()) j["phantom"]["path"] = cfg.phantom.path;
    j["geometry"] = {{"comp_px", cfg.geometry.comp_px},
                     {"img_px", cfg.geometry.img_px},
                     {"dx_mm", cfg.geometry.dx_mm},
                     {"radius_mm", cfg.geometry.radius_mm},
                     {"l_sensors", cfg.geometry.l_sensors}};
    j["timing"] = {{"m_samples", cfg.timing.m_samples}, {"dt_us", cfg.timing.dt_us}};
    j["c0_mm_per_us"] = cfg.c0;
    j["snr_db"] = cfg.snr_db ? json(*cfg.snr_db) : json();
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["deterministic"] = cfg.deterministic;
    j["fine_grid"] = cfg.fine_grid;
    j["method"] = {{"name", cfg.method.name},
                   {"lambda", cfg.method.lambda},
                   {"lambda_grid", cfg.method.lambda_grid},
                   {"lambda_p_factor", cfg.method.lambda_p_factor},
                   {"alpha", cfg.method.reg.alpha},
                   {"epsilon", cfg.method.reg.epsilon},
                   {"q", cfg.method.reg.q},
                   {"order", cfg.method.reg.order},
                   {"n_s", cfg.method.n_s},
                   {"solver",
                    {{"eps_s", cfg.method.solver.eps_s},
                     {"eps_cg", cfg.method.solver.eps_cg},
                     {"eps_o", cfg.method.solver.eps_o},
                     {"rho", cfg.method.solver.rho},
                     {"max_outer", cfg.method.solver.max_outer},
                     {"max_cg", cfg.method.solver.max_cg},
                     {"max_ls", cfg.method.solver.max_ls}}},
                   {"fista",
                    {{"max_iters", cfg.method.fista.max_iters},
                     {"lipschitz", cfg.method.fista.lipschitz ? json(*cfg.method.fista.lipschitz) : json()},
                     {"power_iters", cfg.method.fista.power_iters},
                     {"tv_inner_iters", cfg.method.fista.tv_inner_iters},
                     {"nonneg", cfg.method.fista.nonneg},
                     {"restart", cfg.method.fista.restart},
                     {"rel_tol", cfg.method.fista.rel_tol}}}};
    return j;
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg; // defaults are the desk values
    if (name == "desk") {
        cfg.geometry = {256, 64, 0.1, 6.0, 16};
        cfg.timing = {400, 0.02};
        cfg.phantom.size_px = 64;
        // reduced-scale solves converge well before the full-scale tolerances
        cfg.method.solver.eps_cg = 1e-4;
        cfg.method.solver.eps_o = 1e-4;
        cfg.method.solver.max_cg = 120;
        cfg.method.fista.rel_tol = 1e-5;
        cfg.method.fista.max_iters = 400;
        cfg.threads = 2;
        return cfg;
    }
    if (name == "paper") {
        cfg.geometry = {512, 128, 0.1, 12.0, 128};
        cfg.timing = {1600, 0.01};
        cfg.phantom.size_px = 128;
        cfg.method.solver = SolverConfig{}; // all tolerances 1e-6
        cfg.method.fista.rel_tol = 1e-6;
        cfg.method.fista.max_iters = 2000;
        cfg.threads = 2;
        return cfg;
    }
    throw Error(ErrorKind::config, "unknown preset: " + name + " (expected paper or desk)");
}

std::optional<std::string> wraparound_warning(const ExperimentConfig& cfg) {
    double travel = cfg.c0 * cfg.timing.m_samples * cfg.timing.dt_us;
    double comp_extent = cfg.geometry.comp_px * cfg.geometry.dx_mm;
    double img_extent = cfg.geometry.img_px * cfg.geometry.dx_mm;
    double bound = 0.5 * (comp_extent - img_extent) + cfg.geometry.radius_mm;
    if (travel < bound) return std::nullopt;
    std::ostringstream msg;
    msg << "acquisition window too long for the grid: c0*M*dt = " << travel
        << " mm >= " << bound << " mm; spectral wrap-around may re-enter the imaging region";
    return msg.str();
}

} // namespace pat
