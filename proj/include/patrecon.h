/*
 * patrecon C API: photoacoustic tomography reconstruction toolkit.
 *
 * All functions return PAT_OK (0) on success; on failure they return an
 * error code and leave a thread-local message readable via pat_last_error().
 * Objects are opaque handles created and destroyed through this API.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with pat_string_free().
 *
 * Experiment configs are JSON documents; see README.md for the schema and
 * pat_preset_config() for complete starting points.
 */

#ifndef PATRECON_H
#define PATRECON_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pat_image pat_image;
typedef struct pat_measurements pat_measurements;

typedef enum pat_status {
    PAT_OK = 0,
    PAT_ERR_INVALID_ARGUMENT = 1,
    PAT_ERR_DIMENSION = 2,
    PAT_ERR_GEOMETRY = 3,
    PAT_ERR_RESOLUTION = 4,
    PAT_ERR_IO = 5,
    PAT_ERR_NUMERIC = 6,
    PAT_ERR_DEGENERATE = 7,
    PAT_ERR_CONFIG = 8,
    PAT_ERR_UNKNOWN = 9
} pat_status;

const char* pat_version(void);
const char* pat_status_name(pat_status status);
const char* pat_last_error(void);
void pat_string_free(char* s);

/* Complete experiment config for a named preset ("paper" or "desk"). */
pat_status pat_preset_config(const char* name, char** out_json);

/* Non-fatal config diagnostics (e.g. wrap-around travel-time violations);
 * *out_message is an empty string when there are none. */
pat_status pat_config_warnings(const char* config_json, char** out_message);

/* ---- images ---- */

pat_status pat_image_create(int32_t nx, int32_t ny, double dx_mm, double dy_mm,
                            const double* data /* nullable: zeros */, pat_image** out);
void pat_image_destroy(pat_image* img);
pat_status pat_image_dims(const pat_image* img, int32_t* nx, int32_t* ny, double* dx_mm,
                          double* dy_mm);
/* Copies nx*ny row-major values; capacity is the element count of out. */
pat_status pat_image_copy_data(const pat_image* img, double* out, size_t capacity);
pat_status pat_image_read(const char* path, pat_image** out, char** metadata_json /* nullable */);
pat_status pat_image_write(const pat_image* img, const char* path,
                           const char* provenance_json /* nullable */);
/* 8-bit grayscale preview, min->0 max->255. Not a data format. */
pat_status pat_image_write_png(const pat_image* img, const char* path);

/* ---- measurements ---- */

void pat_measurements_destroy(pat_measurements* meas);
pat_status pat_measurements_dims(const pat_measurements* meas, int32_t* l_sensors,
                                 int32_t* m_samples, double* dt_us);
pat_status pat_measurements_copy_data(const pat_measurements* meas, double* out, size_t capacity);
pat_status pat_measurements_read(const char* path, pat_measurements** out,
                                 char** metadata_json /* nullable */);
pat_status pat_measurements_write(const pat_measurements* meas, const char* path,
                                  const char* provenance_json /* nullable */);

/* ---- pipeline ---- */

/* Phantom image on the configured computational grid. */
pat_status pat_phantom(const char* config_json, pat_image** out);

/* Forward-simulated measurements (spectral propagator + Gaussian noise at the
 * configured SNR; deterministic per seed). */
pat_status pat_simulate(const char* config_json, const pat_image* phantom,
                        pat_measurements** out);

/* Run the configured reconstruction method. ground_truth may be NULL unless
 * the config requests lambda-grid tuning. out_report_json (optional) receives
 * the solve report, tuning trials and the lambda actually used. */
pat_status pat_reconstruct(const char* config_json, const pat_measurements* meas,
                           const pat_image* ground_truth, pat_image** out_image,
                           char** out_report_json);

/* ---- metrics ---- */

/* params_json (nullable): {"region":[x0,y0,w,h], "dynamic_range":<double>} */
pat_status pat_ssim(const pat_image* x, const pat_image* ref, const char* params_json,
                    double* out);
pat_status pat_fom(const pat_image* x, const char* params_json, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PATRECON_H */
