#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwsim/core_model.hpp"
#include "pwsim/langevin.hpp"
#include "pwsim/tomography.hpp"

namespace pwsim {

enum class RunMode { analytic, numeric };
enum class OutputFormat { csv, json };
enum class AxisScale { linear, log };

struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  AxisScale scale = AxisScale::linear;

  std::vector<double> values() const;
};

struct PhysicsConfig {
  double gamma_i = 1.0;
  double gamma_s = 1.0;
  std::optional<double> delta;  ///< overrides g_s * amplitude^2 when set
  double g_s = 1.0;
  double n_b = 0.0;
  double temperature_k = 0.0;
  double omega_i = 0.0;
};

/// Pump-induced photoluminescence background; values are illustrative.
struct BackgroundConfig {
  double activation_energy_mev = 1.0;
  double pl_strength = 1.0;  ///< only applied under a pulsed drive
};

struct DetectionConfig {
  double window_ps = 120.0;
  double step_ps = 0.25;
  double stationary_window_ps = 0.0;  ///< 0 = coincidence sampling after the transient
  std::optional<double> settle_ps;    ///< continuous drive; default from the spectral gap
};

struct Tolerances {
  double rel = 1e-9;
  double abs = 1e-12;
  double stability_guard = 1e-9;
  double w_residual = 1e-3;
};

struct RunConfig {
  std::optional<RunMode> mode;
  PumpDrive drive{PumpKind::continuous, 1.0, 0.0, 4.0, 1.0};
  PhysicsConfig physics;
  BackgroundConfig background;
  DetectionConfig detection;
  std::vector<SweepAxis> sweep;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::csv;
  Tolerances tolerances;
  int threads = 0;  ///< 0 = hardware concurrency

  /// Parses a JSON document; unknown keys are rejected. Throws ConfigError.
  static RunConfig from_json(std::string_view text);
  static RunConfig load(const std::string& path);
  void validate() const;

  double effective_delta() const;
  double effective_g_s() const;
  double intensity() const { return drive.amplitude * drive.amplitude; }
  RunMode mode_or(RunMode fallback) const { return mode.value_or(fallback); }
};

/// One emitted record. Optional fields are blank when the point is outside
/// the stability region.
struct PointResult {
  double delta = 0.0;
  double n_b = 0.0;
  double intensity = 0.0;
  double temperature_k = 0.0;
  std::optional<double> x;
  std::optional<double> residual;
  std::optional<double> n_ii;
  std::optional<double> n_ss;
  std::optional<double> n_ssp;
  std::optional<double> abs_n_is;
  double stability_margin = 0.0;

  // Not emitted: run-to-run varying or matrix-valued.
  double wall_time_ms = 0.0;
  std::optional<DensityMatrix4> rho;
  std::optional<WMixture> mixture;
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<PointResult> rows;
};

/// Column names shared by CSV and JSON output, in emission order.
const std::vector<std::string>& result_columns();

/// Analytic mode uses the closed forms; numeric mode integrates the moments and
/// runs the tomography. Unstable parameters raise StabilityError.
PointResult run_single(const RunConfig& config);

/// Analytic (default) or numeric evaluation over a (delta, n_b) grid.
SweepResult sweep_fig2(const RunConfig& config);

/// Pulsed numeric evaluation over a (intensity, temperature_k) grid, where
/// intensity = amplitude^2 and delta = g_s * intensity.
SweepResult sweep_fig3(const RunConfig& config);

std::string format_result(const SweepResult& result, OutputFormat format);
void emit(const SweepResult& result, const std::string& path, OutputFormat format);

/// JSON record with rho (real and imaginary parts) and the W-mixture fit.
std::string format_tomography(const PointResult& point);

OutputFormat parse_format(std::string_view name);
RunMode parse_mode(std::string_view name);

}  // namespace pwsim
