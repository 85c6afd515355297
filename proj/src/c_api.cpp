#include "pwsim/pwsim.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "pwsim/errors.hpp"
#include "pwsim/harness.hpp"
#include "pwsim/steady_analytic.hpp"

struct pwsim_config {
  pwsim::RunConfig config;
  std::string output_path_cache;
};

struct pwsim_result {
  pwsim::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

pwsim_status fail(pwsim_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Translates the C++ exception in flight into a status code.
pwsim_status translate() {
  try {
    throw;
  } catch (const pwsim::StabilityError& e) {
    return fail(PWSIM_ERR_UNSTABLE, e.what());
  } catch (const pwsim::ConfigError& e) {
    return fail(PWSIM_ERR_CONFIG, e.what());
  } catch (const pwsim::UndefinedStateError& e) {
    return fail(PWSIM_ERR_UNDEFINED, e.what());
  } catch (const pwsim::NumericError& e) {
    return fail(PWSIM_ERR_NUMERIC, e.what());
  } catch (const pwsim::IoError& e) {
    return fail(PWSIM_ERR_IO, e.what());
  } catch (const pwsim::Error& e) {
    return fail(PWSIM_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(PWSIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PWSIM_ERR_INTERNAL, "unknown error");
  }
}

template <class F>
pwsim_status guarded(F&& f) {
  try {
    f();
    return PWSIM_OK;
  } catch (...) {
    return translate();
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const pwsim::PointResult* row_at(const pwsim_result* r, size_t row) {
  if (!r) throw pwsim::ConfigError("null result handle");
  if (row >= r->result.rows.size()) throw pwsim::ConfigError("row index out of range");
  return &r->result.rows[row];
}

template <class Driver>
pwsim_status drive(const pwsim_config* config, pwsim_result** out, Driver&& driver) {
  if (!config || !out) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<pwsim_result>();
    r->result = driver(config->config);
    *out = r.release();
  });
}

}  // namespace

extern "C" {

const char* pwsim_version(void) { return "1.0.0"; }

const char* pwsim_last_error(void) { return g_last_error.c_str(); }

const char* pwsim_status_name(pwsim_status status) {
  switch (status) {
    case PWSIM_OK: return "ok";
    case PWSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PWSIM_ERR_CONFIG: return "config error";
    case PWSIM_ERR_NUMERIC: return "numeric failure";
    case PWSIM_ERR_IO: return "i/o error";
    case PWSIM_ERR_UNSTABLE: return "unstable parameters";
    case PWSIM_ERR_UNDEFINED: return "undefined";
    case PWSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pwsim_status pwsim_config_parse(const char* json_text, pwsim_config** out) {
  if (!json_text || !out) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<pwsim_config>();
    c->config = pwsim::RunConfig::from_json(json_text);
    *out = c.release();
  });
}

pwsim_status pwsim_config_load(const char* path, pwsim_config** out) {
  if (!path || !out) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<pwsim_config>();
    c->config = pwsim::RunConfig::load(path);
    *out = c.release();
  });
}

void pwsim_config_free(pwsim_config* config) { delete config; }

pwsim_status pwsim_config_set_mode(pwsim_config* config, const char* mode) {
  if (!config || !mode) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->config.mode = pwsim::parse_mode(mode); });
}

pwsim_status pwsim_config_set_format(pwsim_config* config, const char* format) {
  if (!config || !format) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->config.format = pwsim::parse_format(format); });
}

pwsim_status pwsim_config_set_output_path(pwsim_config* config, const char* path) {
  if (!config) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  if (path) {
    config->config.output_path = path;
  } else {
    config->config.output_path.reset();
  }
  return PWSIM_OK;
}

const char* pwsim_config_output_path(const pwsim_config* config) {
  if (!config || !config->config.output_path) return nullptr;
  auto* mutable_config = const_cast<pwsim_config*>(config);
  mutable_config->output_path_cache = *config->config.output_path;
  return mutable_config->output_path_cache.c_str();
}

const char* pwsim_config_format(const pwsim_config* config) {
  if (!config) return nullptr;
  return config->config.format == pwsim::OutputFormat::json ? "json" : "csv";
}

pwsim_status pwsim_run(const pwsim_config* config, pwsim_result** out) {
  return drive(config, out, [](const pwsim::RunConfig& c) {
    pwsim::SweepResult r;
    r.rows.push_back(pwsim::run_single(c));
    return r;
  });
}

pwsim_status pwsim_sweep_fig2(const pwsim_config* config, pwsim_result** out) {
  return drive(config, out, [](const pwsim::RunConfig& c) { return pwsim::sweep_fig2(c); });
}

pwsim_status pwsim_sweep_fig3(const pwsim_config* config, pwsim_result** out) {
  return drive(config, out, [](const pwsim::RunConfig& c) { return pwsim::sweep_fig3(c); });
}

void pwsim_result_free(pwsim_result* result) { delete result; }

size_t pwsim_result_rows(const pwsim_result* result) {
  return result ? result->result.rows.size() : 0;
}

size_t pwsim_result_column_count(void) { return pwsim::result_columns().size(); }

const char* pwsim_result_column_name(size_t index) {
  const auto& cols = pwsim::result_columns();
  return index < cols.size() ? cols[index].c_str() : nullptr;
}

pwsim_status pwsim_result_value(const pwsim_result* result, size_t row, const char* column,
                                double* out) {
  if (!column || !out) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const pwsim::PointResult& r = *row_at(result, row);
    const std::string name = column;
    std::optional<double> v;
    if (name == "delta") v = r.delta;
    else if (name == "n_b") v = r.n_b;
    else if (name == "intensity") v = r.intensity;
    else if (name == "temperature_k") v = r.temperature_k;
    else if (name == "x") v = r.x;
    else if (name == "residual") v = r.residual;
    else if (name == "n_ii") v = r.n_ii;
    else if (name == "n_ss") v = r.n_ss;
    else if (name == "n_ssp") v = r.n_ssp;
    else if (name == "abs_n_is") v = r.abs_n_is;
    else if (name == "stability_margin") v = r.stability_margin;
    else throw pwsim::ConfigError("unknown column \"" + name + "\"");
    if (!v) throw pwsim::UndefinedStateError("cell " + name + " is blank for this row");
    *out = *v;
  });
}

pwsim_status pwsim_result_w_form(const pwsim_result* result, size_t row, int* w_form) {
  if (!w_form) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const pwsim::PointResult& r = *row_at(result, row);
    if (!r.mixture) throw pwsim::UndefinedStateError("no tomography fit for this row");
    *w_form = r.mixture->w_form ? 1 : 0;
  });
}

pwsim_status pwsim_result_wall_time_ms(const pwsim_result* result, size_t row, double* out) {
  if (!out) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = row_at(result, row)->wall_time_ms; });
}

pwsim_status pwsim_result_rho(const pwsim_result* result, size_t row, double re[16], double im[16]) {
  if (!re || !im) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const pwsim::PointResult& r = *row_at(result, row);
    if (!r.rho) throw pwsim::UndefinedStateError("no density matrix for this row");
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        re[4 * m + n] = r.rho->rho(m, n).real();
        im[4 * m + n] = r.rho->rho(m, n).imag();
      }
    }
  });
}

pwsim_status pwsim_result_format(const pwsim_result* result, const char* format, char** out_text) {
  if (!result || !format || !out_text) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  *out_text = nullptr;
  return guarded([&] {
    *out_text = copy_string(pwsim::format_result(result->result, pwsim::parse_format(format)));
  });
}

pwsim_status pwsim_result_write(const pwsim_result* result, const char* path, const char* format) {
  if (!result || !path || !format) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { pwsim::emit(result->result, path, pwsim::parse_format(format)); });
}

pwsim_status pwsim_result_tomography_json(const pwsim_result* result, size_t row, char** out_text) {
  if (!out_text) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  *out_text = nullptr;
  return guarded([&] { *out_text = copy_string(pwsim::format_tomography(*row_at(result, row))); });
}

void pwsim_string_free(char* text) { std::free(text); }

pwsim_status pwsim_steady_moments_eval(double gamma_i, double gamma_s, double delta, double n_b,
                                       pwsim_steady_moments* out) {
  if (!out) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const pwsim::SteadyMoments m = pwsim::steady_moments(gamma_i, gamma_s, delta, n_b);
    *out = {m.n_ii, m.n_ss, m.n_ssp, m.n_is.real(), m.n_is.imag()};
  });
}

pwsim_status pwsim_entanglement_x(const pwsim_steady_moments* moments, double* x) {
  if (!moments || !x) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pwsim::SteadyMoments m;
    m.n_ii = moments->n_ii;
    m.n_ss = moments->n_ss;
    m.n_ssp = moments->n_ssp;
    m.n_is = {moments->n_is_re, moments->n_is_im};
    *x = pwsim::entanglement_x(m);
  });
}

pwsim_status pwsim_stability_margin(double gamma_i, double gamma_s, double delta, double* margin,
                                    int* stable) {
  if (!margin || !stable) return fail(PWSIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const pwsim::StabilityReport r = pwsim::stability_check(gamma_i, gamma_s, delta);
    *margin = r.margin;
    *stable = r.stable ? 1 : 0;
  });
}

}  // extern "C"
