#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pat/fista.hpp"
#include "pat/phantoms.hpp"
#include "pat/regularizers.hpp"
#include "pat/solver.hpp"

namespace pat {

inline constexpr int kConfigSchemaVersion = 1;
const char* version_string();

struct GeometryConfig {
    int comp_px = 256;      // computational grid edge
    int img_px = 64;        // imaging subregion edge
    double dx_mm = 0.1;     // grid spacing (square pixels)
    double radius_mm = 6.0; // sensor circle radius
    int l_sensors = 16;
};

struct TimingConfig {
    int m_samples = 400;
    double dt_us = 0.02;
};

/// Reconstruction method selection plus all of its parameters.
/// name: proposed-form1 | proposed-form2 | fista-tv | tikhonov.
/// A nonempty lambda_grid selects tuning mode (best SSIM against ground truth).
struct MethodConfig {
    std::string name = "proposed-form1";
    double lambda = 1e-3;
    std::vector<double> lambda_grid;
    double lambda_p_factor = 10.0;
    RegParams reg;
    int n_s = 10;
    SolverConfig solver; // lambda/lambda_p filled in per solve
    FistaConfig fista;   // lambda_tv filled in per solve
};

struct ExperimentConfig {
    PhantomSpec phantom;
    GeometryConfig geometry;
    TimingConfig timing;
    double c0 = 1.5; // mm/us
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    MethodConfig method;
    int threads = 1;
    bool deterministic = false; // single worker, deterministic FFT plans
    bool fine_grid = false;     // simulate on a 2x finer grid (inverse-crime check)

    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// "paper": the full-scale protocol (512^2 grid, M = 1600, 100 MHz).
/// "desk": the reduced-scale analogue (256^2 grid, M = 400, 50 MHz).
ExperimentConfig preset(const std::string& name);

/// Circular-filter wrap-around check: sound must not travel far enough to
/// re-enter the imaging region within the acquisition window. Returns a
/// warning message if violated.
std::optional<std::string> wraparound_warning(const ExperimentConfig& cfg);

} // namespace pat
