/*
 * C interface to the polariton W-state simulator.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a pwsim_status; on
 * failure pwsim_last_error() holds a message for the calling thread until its
 * next failing call. Strings returned through char** are released with
 * pwsim_string_free.
 */
#ifndef PWSIM_H
#define PWSIM_H

#include <stddef.h>

#if defined(_WIN32)
#define PWSIM_API __declspec(dllexport)
#else
#define PWSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pwsim_status {
  PWSIM_OK = 0,
  PWSIM_ERR_INVALID_ARGUMENT = 1,
  PWSIM_ERR_CONFIG = 2,
  PWSIM_ERR_NUMERIC = 3,
  PWSIM_ERR_IO = 4,
  PWSIM_ERR_UNSTABLE = 5,  /* gamma_i * gamma_s <= 4 delta^2 */
  PWSIM_ERR_UNDEFINED = 6, /* no emission, or a blank result cell */
  PWSIM_ERR_INTERNAL = 7
} pwsim_status;

typedef struct pwsim_config pwsim_config;
typedef struct pwsim_result pwsim_result;

PWSIM_API const char* pwsim_version(void);
PWSIM_API const char* pwsim_last_error(void);
PWSIM_API const char* pwsim_status_name(pwsim_status status);

/* ---- configuration ---------------------------------------------------- */

PWSIM_API pwsim_status pwsim_config_parse(const char* json_text, pwsim_config** out);
PWSIM_API pwsim_status pwsim_config_load(const char* path, pwsim_config** out);
PWSIM_API void pwsim_config_free(pwsim_config* config);

/* mode: "analytic" | "numeric"; format: "csv" | "json" */
PWSIM_API pwsim_status pwsim_config_set_mode(pwsim_config* config, const char* mode);
PWSIM_API pwsim_status pwsim_config_set_format(pwsim_config* config, const char* format);
PWSIM_API pwsim_status pwsim_config_set_output_path(pwsim_config* config, const char* path);

/* NULL when the config names no output path. Valid until the config changes. */
PWSIM_API const char* pwsim_config_output_path(const pwsim_config* config);
PWSIM_API const char* pwsim_config_format(const pwsim_config* config);

/* ---- drivers ---------------------------------------------------------- */

PWSIM_API pwsim_status pwsim_run(const pwsim_config* config, pwsim_result** out);
PWSIM_API pwsim_status pwsim_sweep_fig2(const pwsim_config* config, pwsim_result** out);
PWSIM_API pwsim_status pwsim_sweep_fig3(const pwsim_config* config, pwsim_result** out);
PWSIM_API void pwsim_result_free(pwsim_result* result);

/* ---- results ---------------------------------------------------------- */

PWSIM_API size_t pwsim_result_rows(const pwsim_result* result);
PWSIM_API size_t pwsim_result_column_count(void);
PWSIM_API const char* pwsim_result_column_name(size_t index);

/* PWSIM_ERR_UNDEFINED for blank cells (points outside the stability region). */
PWSIM_API pwsim_status pwsim_result_value(const pwsim_result* result, size_t row,
                                          const char* column, double* out);
/* 1 when the reconstructed state matches the W-mixture form within the residual
   threshold, 0 when it does not; PWSIM_ERR_UNDEFINED for blank rows. */
PWSIM_API pwsim_status pwsim_result_w_form(const pwsim_result* result, size_t row, int* w_form);
PWSIM_API pwsim_status pwsim_result_wall_time_ms(const pwsim_result* result, size_t row,
                                                 double* out);
/* Row-major 4x4 density matrix over |1_i, 1_sn>. */
PWSIM_API pwsim_status pwsim_result_rho(const pwsim_result* result, size_t row, double re[16],
                                        double im[16]);

PWSIM_API pwsim_status pwsim_result_format(const pwsim_result* result, const char* format,
                                           char** out_text);
PWSIM_API pwsim_status pwsim_result_write(const pwsim_result* result, const char* path,
                                          const char* format);
PWSIM_API pwsim_status pwsim_result_tomography_json(const pwsim_result* result, size_t row,
                                                    char** out_text);
PWSIM_API void pwsim_string_free(char* text);

/* ---- closed forms for continuous pumping ------------------------------ */

typedef struct pwsim_steady_moments {
  double n_ii;
  double n_ss;
  double n_ssp;
  double n_is_re;
  double n_is_im;
} pwsim_steady_moments;

PWSIM_API pwsim_status pwsim_steady_moments_eval(double gamma_i, double gamma_s, double delta,
                                                 double n_b, pwsim_steady_moments* out);
PWSIM_API pwsim_status pwsim_entanglement_x(const pwsim_steady_moments* moments, double* x);
PWSIM_API pwsim_status pwsim_stability_margin(double gamma_i, double gamma_s, double delta,
                                              double* margin, int* stable);

#ifdef __cplusplus
}
#endif

#endif /* PWSIM_H */
