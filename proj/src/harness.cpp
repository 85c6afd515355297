#include "pwsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pwsim/errors.hpp"
#include "pwsim/steady_analytic.hpp"

namespace pwsim {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

double get_number(const json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::optional<double> get_optional(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get_number(obj, key, where, 0.0);
}

std::string get_string(const json& obj, const char* key, const std::string& where, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

PumpKind parse_kind(const std::string& s) {
  if (s == "continuous") return PumpKind::continuous;
  if (s == "gaussian") return PumpKind::gaussian;
  throw ConfigError("drive.kind: expected \"continuous\" or \"gaussian\", got \"" + s + "\"");
}

AxisScale parse_scale(const std::string& s) {
  if (s == "linear") return AxisScale::linear;
  if (s == "log") return AxisScale::log;
  throw ConfigError("sweep axis scale: expected \"linear\" or \"log\", got \"" + s + "\"");
}

// ---------------------------------------------------------------------------
// Point evaluation

StepControl step_control(const RunConfig& c) {
  StepControl s;
  s.rel_tol = c.tolerances.rel;
  s.abs_tol = c.tolerances.abs;
  return s;
}

DriftModel drift_model(const RunConfig& c) {
  DriftParams p;
  p.gamma_i = c.physics.gamma_i;
  p.gamma_s = c.physics.gamma_s;
  p.g_s = c.effective_g_s();
  p.omega_i = c.physics.omega_i;
  return DriftModel(p, c.drive);
}

BackgroundModel background_model(const RunConfig& c) {
  BackgroundModel b;
  b.n_uniform = c.physics.n_b;
  b.temperature_k = c.physics.temperature_k;
  b.activation_energy_mev = c.background.activation_energy_mev;
  // Pump-induced PL only follows a pulse; continuous runs keep the uniform n_b.
  b.pl_strength = c.drive.kind == PumpKind::gaussian ? c.background.pl_strength : 0.0;
  return b;
}

/// Long enough for the slowest moment mode, decaying at gamma_i + gamma_s - Omega,
/// to fall below e^-25 of its initial amplitude.
double default_settle_time(double gamma_i, double gamma_s, double delta) {
  const SpectralData s = spectral_data(gamma_i, gamma_s, delta);
  const double slowest = gamma_i + gamma_s - s.omega_cap;
  return std::max(40.0 / std::min(gamma_i, gamma_s), 25.0 / slowest);
}

void fill_from_fit(PointResult& r, const DensityMatrix4& rho, const Tolerances& tol) {
  FitOptions opts;
  opts.residual_threshold = tol.w_residual;
  const WMixture fit = fit_w_mixture(rho, opts);
  r.x = fit.x_weight;
  r.residual = fit.residual;
  r.rho = rho;
  r.mixture = fit;
}

void run_analytic(const RunConfig& c, PointResult& r) {
  if (c.drive.kind != PumpKind::continuous) {
    throw ConfigError("analytic mode requires a continuous drive; use --mode numeric for pulses");
  }
  const SteadyMoments m = steady_moments(c.physics.gamma_i, c.physics.gamma_s, r.delta,
                                         c.physics.n_b, c.tolerances.stability_guard);
  r.n_ii = m.n_ii;
  r.n_ss = m.n_ss;
  r.n_ssp = m.n_ssp;
  r.abs_n_is = std::abs(m.n_is);
  // Closed-form X; the fit of the closed-form rho supplies the residual.
  const double x = entanglement_x(m);
  fill_from_fit(r, DensityMatrix4{steady_density_matrix(m), 1.0}, c.tolerances);
  r.x = std::clamp(x, 0.0, 1.0);
}

void summarize_moments(PointResult& r, const CorrelatorGrid& grid) {
  const std::vector<double> w = trapezoid_weights(grid.times);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double n_ii = 0.0, n_ss = 0.0, n_ssp = 0.0, n_is = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const MomentState& m = grid.moments[k];
    double diag = 0.0, off = 0.0, pair = 0.0;
    for (int s = 1; s < kModes; ++s) {
      diag += m.normal(s, s).real();
      pair += std::abs(m.anomalous(0, s));
      for (int u = 1; u < kModes; ++u) {
        if (u != s) off += m.normal(s, u).real();
      }
    }
    n_ii += w[k] * m.normal(0, 0).real();
    n_ss += w[k] * diag / 4.0;
    n_ssp += w[k] * off / 12.0;
    n_is += w[k] * pair / 4.0;
  }
  r.n_ii = n_ii / total;
  r.n_ss = n_ss / total;
  r.n_ssp = n_ssp / total;
  r.abs_n_is = n_is / total;
}

void run_numeric(const RunConfig& c, PointResult& r) {
  const DriftModel drift = drift_model(c);
  const BackgroundModel background = background_model(c);
  DetectionWindow window;
  window.step = c.detection.step_ps;
  if (c.drive.kind == PumpKind::continuous) {
    const StabilityReport st = stability_check(c.physics.gamma_i, c.physics.gamma_s, r.delta);
    if (!(st.margin > c.tolerances.stability_guard)) {
      std::ostringstream os;
      os << "stability condition gamma_i*gamma_s > 4*delta^2 violated (margin " << st.margin
         << "); continuous pumping has no steady state";
      throw StabilityError(os.str());
    }
    window.start = c.detection.settle_ps.value_or(
        default_settle_time(c.physics.gamma_i, c.physics.gamma_s, r.delta));
    window.duration = c.detection.stationary_window_ps;
  } else {
    window.start = 0.0;
    window.duration = c.detection.window_ps;
  }
  const CorrelatorGrid grid = correlator_grid(drift, background, window, step_control(c));
  summarize_moments(r, grid);
  fill_from_fit(r, reconstruct_rho(grid), c.tolerances);
}

/// Record for a point without a defined state: parameters and margin only.
PointResult blank_row(const RunConfig& c) {
  PointResult r;
  r.delta = c.effective_delta();
  r.n_b = c.physics.n_b;
  r.intensity = c.intensity();
  r.temperature_k = c.physics.temperature_k;
  r.stability_margin = stability_check(c.physics.gamma_i, c.physics.gamma_s, r.delta).margin;
  return r;
}

PointResult evaluate(const RunConfig& c, RunMode mode) {
  c.validate();
  PointResult r = blank_row(c);

  const auto start = std::chrono::steady_clock::now();
  if (mode == RunMode::analytic) {
    run_analytic(c, r);
  } else {
    run_numeric(c, r);
  }
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

using AxisSetter = std::function<void(RunConfig&, double)>;

struct AxisSpec {
  SweepAxis axis;
  AxisSetter set;
};

std::vector<PointResult> run_grid(const RunConfig& base, const std::vector<AxisSpec>& axes,
                                  RunMode mode) {
  std::vector<std::vector<double>> values;
  std::size_t total = 1;
  for (const auto& a : axes) {
    values.push_back(a.axis.values());
    total *= values.back().size();
  }

  std::vector<RunConfig> configs;
  configs.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    RunConfig c = base;
    std::size_t rest = flat;
    // Last axis varies fastest: rows come out in lexicographic axis order.
    for (std::size_t a = axes.size(); a-- > 0;) {
      const std::size_t n = values[a].size();
      axes[a].set(c, values[a][rest % n]);
      rest /= n;
    }
    c.validate();
    configs.push_back(std::move(c));
  }

  std::vector<PointResult> rows(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        rows[i] = evaluate(configs[i], mode);
      } catch (const StabilityError&) {
        rows[i] = blank_row(configs[i]);
      } catch (const UndefinedStateError&) {
        rows[i] = blank_row(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned n_threads = base.threads > 0 ? static_cast<unsigned>(base.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, total));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

const SweepAxis* find_axis(const RunConfig& c, const std::string& name) {
  for (const auto& a : c.sweep) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void check_axis_names(const RunConfig& c, std::initializer_list<const char*> allowed, const char* verb) {
  for (const auto& a : c.sweep) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* n) { return a.name == n; })) {
      throw ConfigError(std::string(verb) + ": unsupported sweep axis \"" + a.name + "\"");
    }
  }
}

// ---------------------------------------------------------------------------
// Output

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<std::optional<double>> row_values(const PointResult& r) {
  return {r.delta, r.n_b, r.intensity, r.temperature_k, r.x, r.residual,
          r.n_ii, r.n_ss, r.n_ssp, r.abs_n_is, r.stability_margin};
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> SweepAxis::values() const {
  if (count < 1) throw ConfigError("sweep axis " + name + ": count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    if (scale == AxisScale::linear) {
      v[i] = start + f * (stop - start);
    } else {
      v[i] = start * std::pow(stop / start, f);
    }
  }
  v.back() = stop;
  return v;
}

RunConfig RunConfig::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, "config",
                 {"mode", "drive", "physics", "background", "detection", "sweep", "output",
                  "tolerances", "threads"});
  RunConfig c;
  if (doc.contains("mode")) c.mode = parse_mode(get_string(doc, "mode", "config", ""));
  if (doc.contains("threads")) {
    const json& t = doc.at("threads");
    if (!t.is_number_integer()) throw ConfigError("config.threads: expected an integer");
    c.threads = t.get<int>();
  }
  if (doc.contains("drive")) {
    const json& d = doc.at("drive");
    reject_unknown(d, "drive", {"kind", "amplitude", "omega_p", "t0", "sigma"});
    c.drive.kind = parse_kind(get_string(d, "kind", "drive", "continuous"));
    c.drive.amplitude = get_number(d, "amplitude", "drive", c.drive.amplitude);
    c.drive.omega_p = get_number(d, "omega_p", "drive", c.drive.omega_p);
    c.drive.t0 = get_number(d, "t0", "drive", c.drive.t0);
    c.drive.sigma = get_number(d, "sigma", "drive", c.drive.sigma);
  }
  if (doc.contains("physics")) {
    const json& p = doc.at("physics");
    reject_unknown(p, "physics", {"gamma_i", "gamma_s", "delta", "g_s", "n_b", "temperature_k", "omega_i"});
    c.physics.gamma_i = get_number(p, "gamma_i", "physics", c.physics.gamma_i);
    c.physics.gamma_s = get_number(p, "gamma_s", "physics", c.physics.gamma_s);
    c.physics.delta = get_optional(p, "delta", "physics");
    c.physics.g_s = get_number(p, "g_s", "physics", c.physics.g_s);
    c.physics.n_b = get_number(p, "n_b", "physics", c.physics.n_b);
    c.physics.temperature_k = get_number(p, "temperature_k", "physics", c.physics.temperature_k);
    c.physics.omega_i = get_number(p, "omega_i", "physics", c.physics.omega_i);
  }
  if (doc.contains("background")) {
    const json& b = doc.at("background");
    reject_unknown(b, "background", {"activation_energy_mev", "pl_strength"});
    c.background.activation_energy_mev =
        get_number(b, "activation_energy_mev", "background", c.background.activation_energy_mev);
    c.background.pl_strength = get_number(b, "pl_strength", "background", c.background.pl_strength);
  }
  if (doc.contains("detection")) {
    const json& d = doc.at("detection");
    reject_unknown(d, "detection", {"window_ps", "step_ps", "stationary_window_ps", "settle_ps"});
    c.detection.window_ps = get_number(d, "window_ps", "detection", c.detection.window_ps);
    c.detection.step_ps = get_number(d, "step_ps", "detection", c.detection.step_ps);
    c.detection.stationary_window_ps =
        get_number(d, "stationary_window_ps", "detection", c.detection.stationary_window_ps);
    c.detection.settle_ps = get_optional(d, "settle_ps", "detection");
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    reject_unknown(s, "sweep", {"axes"});
    if (s.contains("axes")) {
      if (!s.at("axes").is_array()) throw ConfigError("sweep.axes: expected an array");
      for (const json& a : s.at("axes")) {
        reject_unknown(a, "sweep.axes[]", {"name", "start", "stop", "count", "scale"});
        SweepAxis axis;
        axis.name = get_string(a, "name", "sweep.axes[]", "");
        if (axis.name.empty()) throw ConfigError("sweep.axes[]: missing \"name\"");
        if (!a.contains("start") || !a.contains("stop") || !a.contains("count")) {
          throw ConfigError("sweep axis " + axis.name + ": start, stop and count are required");
        }
        axis.start = get_number(a, "start", "sweep.axes[]", 0.0);
        axis.stop = get_number(a, "stop", "sweep.axes[]", 0.0);
        if (!a.at("count").is_number_integer()) throw ConfigError("sweep axis " + axis.name + ": count must be an integer");
        axis.count = a.at("count").get<int>();
        axis.scale = parse_scale(get_string(a, "scale", "sweep.axes[]", "linear"));
        c.sweep.push_back(axis);
      }
    }
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) c.output_path = get_string(o, "path", "output", "");
    c.format = parse_format(get_string(o, "format", "output", "csv"));
  }
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    reject_unknown(t, "tolerances", {"rel", "abs", "stability_guard", "w_residual"});
    c.tolerances.rel = get_number(t, "rel", "tolerances", c.tolerances.rel);
    c.tolerances.abs = get_number(t, "abs", "tolerances", c.tolerances.abs);
    c.tolerances.stability_guard = get_number(t, "stability_guard", "tolerances", c.tolerances.stability_guard);
    c.tolerances.w_residual = get_number(t, "w_residual", "tolerances", c.tolerances.w_residual);
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void RunConfig::validate() const {
  drive.validate();
  if (!(physics.gamma_i > 0.0) || !(physics.gamma_s > 0.0)) {
    throw ConfigError("physics.gamma_i and physics.gamma_s must be > 0");
  }
  if (physics.delta && (!std::isfinite(*physics.delta) || *physics.delta < 0.0)) {
    throw ConfigError("physics.delta must be finite and >= 0");
  }
  if (physics.delta && *physics.delta > 0.0 && drive.amplitude == 0.0) {
    throw ConfigError("physics.delta > 0 needs a non-zero drive.amplitude");
  }
  if (!std::isfinite(physics.g_s)) throw ConfigError("physics.g_s must be finite");
  if (!std::isfinite(physics.n_b) || physics.n_b < 0.0) throw ConfigError("physics.n_b must be >= 0");
  if (!std::isfinite(physics.temperature_k) || physics.temperature_k < 0.0) {
    throw ConfigError("physics.temperature_k must be >= 0");
  }
  if (!std::isfinite(physics.omega_i)) throw ConfigError("physics.omega_i must be finite");
  if (!(background.activation_energy_mev > 0.0)) throw ConfigError("background.activation_energy_mev must be > 0");
  if (!(background.pl_strength >= 0.0)) throw ConfigError("background.pl_strength must be >= 0");
  if (!(detection.window_ps > 0.0)) throw ConfigError("detection.window_ps must be > 0");
  if (!(detection.step_ps > 0.0)) throw ConfigError("detection.step_ps must be > 0");
  if (!(detection.stationary_window_ps >= 0.0)) throw ConfigError("detection.stationary_window_ps must be >= 0");
  if (detection.settle_ps && !(*detection.settle_ps >= 0.0)) throw ConfigError("detection.settle_ps must be >= 0");
  DetectionWindow{0.0, detection.window_ps, detection.step_ps}.validate();
  DetectionWindow{0.0, detection.stationary_window_ps, detection.step_ps}.validate();
  for (const auto& a : sweep) {
    if (a.count < 1) throw ConfigError("sweep axis " + a.name + ": count must be >= 1");
    if (!std::isfinite(a.start) || !std::isfinite(a.stop)) throw ConfigError("sweep axis " + a.name + ": bounds must be finite");
    if (a.scale == AxisScale::log && (a.start <= 0.0 || a.stop <= 0.0)) {
      throw ConfigError("sweep axis " + a.name + ": log scale needs positive bounds");
    }
  }
  if (!(tolerances.rel > 0.0) || !(tolerances.abs > 0.0)) throw ConfigError("tolerances.rel and tolerances.abs must be > 0");
  if (!(tolerances.stability_guard >= 0.0)) throw ConfigError("tolerances.stability_guard must be >= 0");
  if (!(tolerances.w_residual > 0.0)) throw ConfigError("tolerances.w_residual must be > 0");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

double RunConfig::effective_delta() const {
  return physics.delta ? *physics.delta : physics.g_s * intensity();
}

double RunConfig::effective_g_s() const {
  if (!physics.delta) return physics.g_s;
  const double i = intensity();
  return i > 0.0 ? *physics.delta / i : 0.0;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {
      "delta", "n_b", "intensity", "temperature_k", "x", "residual",
      "n_ii", "n_ss", "n_ssp", "abs_n_is", "stability_margin"};
  return cols;
}

PointResult run_single(const RunConfig& config) {
  return evaluate(config, config.mode_or(RunMode::analytic));
}

SweepResult sweep_fig2(const RunConfig& config) {
  check_axis_names(config, {"delta", "n_b"}, "sweep-fig2");
  const RunMode mode = config.mode_or(RunMode::analytic);
  RunConfig base = config;
  if (mode == RunMode::numeric) base.drive.kind = PumpKind::continuous;

  SweepAxis delta_axis{"delta", 0.05, 0.45, 9, AxisScale::linear};
  SweepAxis nb_axis{"n_b", 0.0, 1.0, 11, AxisScale::linear};
  if (const auto* a = find_axis(config, "delta")) delta_axis = *a;
  if (const auto* a = find_axis(config, "n_b")) nb_axis = *a;

  const std::vector<AxisSpec> axes = {
      {delta_axis, [](RunConfig& c, double v) { c.physics.delta = v; }},
      {nb_axis, [](RunConfig& c, double v) { c.physics.n_b = v; }},
  };
  SweepResult out;
  out.axes = {"delta", "n_b"};
  out.rows = run_grid(base, axes, mode);
  return out;
}

SweepResult sweep_fig3(const RunConfig& config) {
  check_axis_names(config, {"intensity", "temperature_k"}, "sweep-fig3");
  if (config.mode && *config.mode != RunMode::numeric) {
    throw ConfigError("sweep-fig3 runs pulsed numerics only; drop mode \"analytic\"");
  }
  if (config.physics.delta) {
    throw ConfigError("sweep-fig3 sets delta = g_s * intensity; remove physics.delta");
  }
  RunConfig base = config;
  base.drive.kind = PumpKind::gaussian;

  SweepAxis intensity_axis{"intensity", 0.05, 0.4, 8, AxisScale::linear};
  SweepAxis temperature_axis{"temperature_k", 5.0, 20.0, 4, AxisScale::linear};
  if (const auto* a = find_axis(config, "intensity")) intensity_axis = *a;
  if (const auto* a = find_axis(config, "temperature_k")) temperature_axis = *a;
  if (intensity_axis.start < 0.0 || intensity_axis.stop < 0.0) {
    throw ConfigError("sweep-fig3: intensity must be >= 0");
  }

  // Temperature is the outer axis so each temperature series is contiguous.
  const std::vector<AxisSpec> axes = {
      {temperature_axis, [](RunConfig& c, double v) { c.physics.temperature_k = v; }},
      {intensity_axis, [](RunConfig& c, double v) { c.drive.amplitude = std::sqrt(v); }},
  };
  SweepResult out;
  out.axes = {"temperature_k", "intensity"};
  out.rows = run_grid(base, axes, RunMode::numeric);
  return out;
}

std::string format_result(const SweepResult& result, OutputFormat format) {
  const auto& cols = result_columns();
  if (format == OutputFormat::csv) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += cols[i];
    }
    out += '\n';
    for (const auto& row : result.rows) {
      const auto vals = row_values(row);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ',';
        if (vals[i]) out += format_number(*vals[i]);
      }
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    const auto vals = row_values(row);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      obj[cols[i]] = vals[i] ? nlohmann::ordered_json(*vals[i]) : nlohmann::ordered_json(nullptr);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void emit(const SweepResult& result, const std::string& path, OutputFormat format) {
  const std::string text = format_result(result, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing output file: " + path);
}

std::string format_tomography(const PointResult& point) {
  if (!point.rho || !point.mixture) throw UndefinedStateError("no density matrix for this point");
  nlohmann::ordered_json rec = nlohmann::ordered_json::object();
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (int m = 0; m < kSignals; ++m) {
    nlohmann::ordered_json row_re = nlohmann::ordered_json::array();
    nlohmann::ordered_json row_im = nlohmann::ordered_json::array();
    for (int n = 0; n < kSignals; ++n) {
      row_re.push_back(point.rho->rho(m, n).real());
      row_im.push_back(point.rho->rho(m, n).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  rec["rho_re"] = std::move(re);
  rec["rho_im"] = std::move(im);
  rec["normalization"] = point.rho->normalization;
  rec["x_weight"] = point.mixture->x_weight;
  rec["x_raw"] = point.mixture->x_raw;
  rec["residual"] = point.mixture->residual;
  rec["relative_residual"] = point.mixture->relative_residual;
  rec["w_form"] = point.mixture->w_form;
  return rec.dump(2) + "\n";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("format must be \"csv\" or \"json\", got \"" + std::string(name) + "\"");
}

RunMode parse_mode(std::string_view name) {
  if (name == "analytic") return RunMode::analytic;
  if (name == "numeric") return RunMode::numeric;
  throw ConfigError("mode must be \"analytic\" or \"numeric\", got \"" + std::string(name) + "\"");
}

}  // namespace pwsim
