#include "patrecon.h"

#include <cstring>
#include <string>

#include "pat/config.hpp"
#include "pat/io.hpp"
#include "pat/pipeline.hpp"

struct pat_image {
    pat::Image img;
};

struct pat_measurements {
    pat::Measurements meas;
};

namespace {

thread_local std::string g_last_error;

pat_status map_kind(pat::ErrorKind kind) {
    using K = pat::ErrorKind;
    switch (kind) {
    case K::invalid_argument: return PAT_ERR_INVALID_ARGUMENT;
    case K::dimension_mismatch: return PAT_ERR_DIMENSION;
    case K::geometry: return PAT_ERR_GEOMETRY;
    case K::resolution: return PAT_ERR_RESOLUTION;
    case K::io: return PAT_ERR_IO;
    case K::numeric: return PAT_ERR_NUMERIC;
    case K::degenerate: return PAT_ERR_DEGENERATE;
    case K::config: return PAT_ERR_CONFIG;
    }
    return PAT_ERR_UNKNOWN;
}

template <typename Fn>
pat_status guarded(Fn&& fn) {
    try {
        fn();
        return PAT_OK;
    } catch (const pat::Error& e) {
        g_last_error = e.what();
        return map_kind(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PAT_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return PAT_ERR_UNKNOWN;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require_arg(bool ok, const char* msg) {
    pat::require(ok, pat::ErrorKind::invalid_argument, msg);
}

pat::ExperimentConfig parse_config(const char* config_json) {
    require_arg(config_json != nullptr, "config_json is NULL");
    nlohmann::json j = nlohmann::json::parse(config_json, nullptr, false);
    pat::require(!j.is_discarded(), pat::ErrorKind::config, "config is not valid JSON");
    return pat::config_from_json(j);
}

nlohmann::json parse_provenance(const char* provenance_json) {
    if (provenance_json == nullptr) return nlohmann::json();
    nlohmann::json j = nlohmann::json::parse(provenance_json, nullptr, false);
    pat::require(!j.is_discarded(), pat::ErrorKind::invalid_argument,
                 "provenance is not valid JSON");
    return j;
}

std::optional<pat::Rect> parse_region(const nlohmann::json& j) {
    if (!j.contains("region")) return std::nullopt;
    const auto& r = j.at("region");
    pat::require(r.is_array() && r.size() == 4, pat::ErrorKind::invalid_argument,
                 "region must be [x0, y0, w, h]");
    return pat::Rect{r[0].get<int>(), r[1].get<int>(), r[2].get<int>(), r[3].get<int>()};
}

} // namespace

extern "C" {

const char* pat_version(void) { return pat::version_string(); }

const char* pat_status_name(pat_status status) {
    switch (status) {
    case PAT_OK: return "ok";
    case PAT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PAT_ERR_DIMENSION: return "dimension mismatch";
    case PAT_ERR_GEOMETRY: return "geometry error";
    case PAT_ERR_RESOLUTION: return "resolution error";
    case PAT_ERR_IO: return "I/O error";
    case PAT_ERR_NUMERIC: return "numeric failure";
    case PAT_ERR_DEGENERATE: return "degenerate input";
    case PAT_ERR_CONFIG: return "config error";
    case PAT_ERR_UNKNOWN: return "unknown error";
    }
    return "?";
}

const char* pat_last_error(void) { return g_last_error.c_str(); }

void pat_string_free(char* s) { std::free(s); }

pat_status pat_preset_config(const char* name, char** out_json) {
    return guarded([&] {
        require_arg(name != nullptr && out_json != nullptr, "NULL argument");
        *out_json = dup_string(pat::config_to_json(pat::preset(name)).dump(2));
    });
}

pat_status pat_config_warnings(const char* config_json, char** out_message) {
    return guarded([&] {
        require_arg(out_message != nullptr, "NULL argument");
        auto warning = pat::wraparound_warning(parse_config(config_json));
        *out_message = dup_string(warning.value_or(""));
    });
}

pat_status pat_image_create(int32_t nx, int32_t ny, double dx_mm, double dy_mm,
                            const double* data, pat_image** out) {
    return guarded([&] {
        require_arg(out != nullptr, "out is NULL");
        pat::ImageGrid grid(nx, ny, dx_mm, dy_mm);
        pat::Image img = data != nullptr
                             ? pat::Image(grid, std::vector<double>(data, data + grid.count()))
                             : pat::Image(grid);
        pat::require(img.all_finite(), pat::ErrorKind::numeric, "image data is not finite");
        *out = new pat_image{std::move(img)};
    });
}

void pat_image_destroy(pat_image* img) { delete img; }

pat_status pat_image_dims(const pat_image* img, int32_t* nx, int32_t* ny, double* dx_mm,
                          double* dy_mm) {
    return guarded([&] {
        require_arg(img != nullptr, "image is NULL");
        if (nx) *nx = img->img.nx();
        if (ny) *ny = img->img.ny();
        if (dx_mm) *dx_mm = img->img.grid().dx;
        if (dy_mm) *dy_mm = img->img.grid().dy;
    });
}

pat_status pat_image_copy_data(const pat_image* img, double* out, size_t capacity) {
    return guarded([&] {
        require_arg(img != nullptr && out != nullptr, "NULL argument");
        require_arg(capacity >= img->img.size(), "buffer too small");
        std::memcpy(out, img->img.data(), sizeof(double) * img->img.size());
    });
}

pat_status pat_image_read(const char* path, pat_image** out, char** metadata_json) {
    return guarded([&] {
        require_arg(path != nullptr && out != nullptr, "NULL argument");
        nlohmann::json meta;
        pat::Image img = pat::read_image(path, &meta);
        if (metadata_json) *metadata_json = dup_string(meta.dump());
        *out = new pat_image{std::move(img)};
    });
}

pat_status pat_image_write(const pat_image* img, const char* path, const char* provenance_json) {
    return guarded([&] {
        require_arg(img != nullptr && path != nullptr, "NULL argument");
        pat::write_image(path, img->img, parse_provenance(provenance_json));
    });
}

pat_status pat_image_write_png(const pat_image* img, const char* path) {
    return guarded([&] {
        require_arg(img != nullptr && path != nullptr, "NULL argument");
        pat::write_png(path, img->img);
    });
}

void pat_measurements_destroy(pat_measurements* meas) { delete meas; }

pat_status pat_measurements_dims(const pat_measurements* meas, int32_t* l_sensors,
                                 int32_t* m_samples, double* dt_us) {
    return guarded([&] {
        require_arg(meas != nullptr, "measurements is NULL");
        if (l_sensors) *l_sensors = meas->meas.l_sensors();
        if (m_samples) *m_samples = meas->meas.m_samples();
        if (dt_us) *dt_us = meas->meas.dt_us();
    });
}

pat_status pat_measurements_copy_data(const pat_measurements* meas, double* out, size_t capacity) {
    return guarded([&] {
        require_arg(meas != nullptr && out != nullptr, "NULL argument");
        require_arg(capacity >= meas->meas.size(), "buffer too small");
        std::memcpy(out, meas->meas.data(), sizeof(double) * meas->meas.size());
    });
}

pat_status pat_measurements_read(const char* path, pat_measurements** out, char** metadata_json) {
    return guarded([&] {
        require_arg(path != nullptr && out != nullptr, "NULL argument");
        nlohmann::json meta;
        pat::Measurements meas = pat::read_measurements(path, &meta);
        if (metadata_json) *metadata_json = dup_string(meta.dump());
        *out = new pat_measurements{std::move(meas)};
    });
}

pat_status pat_measurements_write(const pat_measurements* meas, const char* path,
                                  const char* provenance_json) {
    return guarded([&] {
        require_arg(meas != nullptr && path != nullptr, "NULL argument");
        pat::write_measurements(path, meas->meas, parse_provenance(provenance_json));
    });
}

pat_status pat_phantom(const char* config_json, pat_image** out) {
    return guarded([&] {
        require_arg(out != nullptr, "out is NULL");
        pat::ExperimentConfig cfg = parse_config(config_json);
        pat::ImageGrid grid(cfg.geometry.comp_px, cfg.geometry.comp_px, cfg.geometry.dx_mm,
                            cfg.geometry.dx_mm);
        *out = new pat_image{pat::make_phantom(cfg.phantom, grid)};
    });
}

pat_status pat_simulate(const char* config_json, const pat_image* phantom,
                        pat_measurements** out) {
    return guarded([&] {
        require_arg(phantom != nullptr && out != nullptr, "NULL argument");
        pat::ExperimentConfig cfg = parse_config(config_json);
        pat::Workbench bench(cfg);
        *out = new pat_measurements{pat::simulate(cfg, bench, phantom->img)};
    });
}

pat_status pat_reconstruct(const char* config_json, const pat_measurements* meas,
                           const pat_image* ground_truth, pat_image** out_image,
                           char** out_report_json) {
    return guarded([&] {
        require_arg(meas != nullptr && out_image != nullptr, "NULL argument");
        pat::ExperimentConfig cfg = parse_config(config_json);
        pat::Workbench bench(cfg);
        pat::ReconResult result = pat::reconstruct(
            cfg, bench, meas->meas, ground_truth != nullptr ? &ground_truth->img : nullptr);
        if (out_report_json) {
            nlohmann::json report = result.report.to_json();
            report["lambda_used"] = result.lambda_used;
            if (!result.tuning.is_null()) report["tuning"] = result.tuning;
            *out_report_json = dup_string(report.dump());
        }
        *out_image = new pat_image{std::move(result.image)};
    });
}

pat_status pat_ssim(const pat_image* x, const pat_image* ref, const char* params_json,
                    double* out) {
    return guarded([&] {
        require_arg(x != nullptr && ref != nullptr && out != nullptr, "NULL argument");
        pat::SsimParams params;
        if (params_json != nullptr) {
            nlohmann::json j = nlohmann::json::parse(params_json, nullptr, false);
            pat::require(!j.is_discarded(), pat::ErrorKind::invalid_argument,
                         "params is not valid JSON");
            params.region = parse_region(j);
            if (j.contains("dynamic_range")) params.dynamic_range = j.at("dynamic_range").get<double>();
            if (j.contains("window")) params.window = j.at("window").get<int>();
            if (j.contains("sigma")) params.sigma = j.at("sigma").get<double>();
        }
        *out = pat::ssim(x->img, ref->img, params);
    });
}

pat_status pat_fom(const pat_image* x, const char* params_json, double* out) {
    return guarded([&] {
        require_arg(x != nullptr && out != nullptr, "NULL argument");
        std::optional<pat::Rect> region;
        if (params_json != nullptr) {
            nlohmann::json j = nlohmann::json::parse(params_json, nullptr, false);
            pat::require(!j.is_discarded(), pat::ErrorKind::invalid_argument,
                         "params is not valid JSON");
            region = parse_region(j);
        }
        *out = pat::fom_db(x->img, region);
    });
}

} // extern "C"
