#include "pwsim/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pwsim/errors.hpp"

namespace pwsim {

namespace {

constexpr double kBoltzmannMevPerK = 8.617333262e-2;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
}

Mat5 pair_drift(Complex idler_diag, Complex signal_diag, Complex row_coupling,
                Complex column_coupling) {
  Mat5 m = Mat5::Zero();
  m(0, 0) = idler_diag;
  for (int s = 1; s < kModes; ++s) {
    m(s, s) = signal_diag;
    m(0, s) = row_coupling;
    m(s, 0) = column_coupling;
  }
  return m;
}

/// Noise inflow into K = <P^+ P>: <F_i^+ F_i> on the idler slot and
/// <F_s F_s^+> on the signal slots (those carry p_s^+).
Mat5 doubled_diffusion(double n_b, double gamma_i, double gamma_s) {
  Mat5 d = Mat5::Zero();
  d(0, 0) = 2.0 * gamma_i * n_b;
  for (int s = 1; s < kModes; ++s) d(s, s) = 2.0 * gamma_s * (n_b + 1.0);
  return d;
}

}  // namespace

void DriftParams::validate() const {
  require_finite(gamma_i, "gamma_i");
  require_finite(gamma_s, "gamma_s");
  require_finite(g_s, "g_s");
  require_finite(omega_i, "omega_i");
  if (omega_s) require_finite(*omega_s, "omega_s");
  if (gamma_i <= 0.0 || gamma_s <= 0.0) throw ConfigError("gamma_i and gamma_s must be > 0");
}

double DriftParams::signal_frequency(double omega_p) const {
  return omega_s ? *omega_s : 2.0 * omega_p - omega_i;
}

DriftMatrix build_drift(const DriftParams& params, const PumpDrive& drive, double t, Frame frame) {
  params.validate();
  drive.validate();
  require_finite(t, "t");
  const double omega_s = params.signal_frequency(drive.omega_p);

  DriftMatrix out;
  out.frame = frame;
  if (frame == Frame::lab) {
    const Complex p = pump_amplitude(drive, t);
    out.m = pair_drift(-kI * params.omega_i - params.gamma_i, kI * omega_s - params.gamma_s,
                       -kI * params.g_s * p * p, kI * params.g_s * std::conj(p) * std::conj(p));
  } else {
    const double p = drive.amplitude * drive.envelope(t);
    const double delta = params.g_s * p * p;
    out.m = pair_drift(-params.gamma_i - kI * params.omega_i,
                       -params.gamma_s + kI * (omega_s - 2.0 * drive.omega_p), -kI * delta,
                       kI * delta);
  }
  return out;
}

DriftModel::DriftModel(DriftParams params, PumpDrive drive)
    : params_(std::move(params)), drive_(drive) {
  params_.validate();
  drive_.validate();
  signal_detuning_ = params_.signal_frequency(drive_.omega_p) - 2.0 * drive_.omega_p + params_.omega_i;
}

double DriftModel::delta(double t) const {
  const double p = drive_.amplitude * drive_.envelope(t);
  return params_.g_s * p * p;
}

double DriftModel::peak_delta() const {
  return params_.g_s * drive_.amplitude * drive_.amplitude;
}

Mat5 DriftModel::carrier_free(double t) const {
  const double d = delta(t);
  return pair_drift(Complex(-params_.gamma_i, 0.0), Complex(-params_.gamma_s, signal_detuning_),
                    -kI * d, kI * d);
}

Mat5 DriftModel::rotating(double t) const {
  Mat5 m = carrier_free(t);
  m.diagonal().array() -= kI * params_.omega_i;
  return m;
}

void NoiseModel::validate() const {
  if (!std::isfinite(n_b) || n_b < 0.0) throw ConfigError("n_b must be finite and >= 0");
  if (!(gamma_i > 0.0) || !(gamma_s > 0.0)) throw ConfigError("gamma_i and gamma_s must be > 0");
}

DiffusionMatrices diffusion_matrix(const NoiseModel& noise) {
  noise.validate();
  DiffusionMatrices d;
  for (int x = 0; x < kModes; ++x) {
    const double big_gamma = 2.0 * (x == kIdlerSlot ? noise.gamma_i : noise.gamma_s);
    d.normal(x, x) = noise.n_b * big_gamma;
    d.anti_normal(x, x) = (noise.n_b + 1.0) * big_gamma;
  }
  return d;
}

void BackgroundModel::validate() const {
  if (!std::isfinite(n_uniform) || n_uniform < 0.0) throw ConfigError("n_b must be finite and >= 0");
  if (!std::isfinite(temperature_k) || temperature_k < 0.0) {
    throw ConfigError("temperature_k must be finite and >= 0");
  }
  if (!std::isfinite(activation_energy_mev) || activation_energy_mev <= 0.0) {
    throw ConfigError("activation_energy_mev must be > 0");
  }
  if (!std::isfinite(pl_strength) || pl_strength < 0.0) throw ConfigError("pl_strength must be >= 0");
}

double BackgroundModel::thermal_occupation() const {
  if (temperature_k <= 0.0) return 0.0;
  return 1.0 / std::expm1(activation_energy_mev / (kBoltzmannMevPerK * temperature_k));
}

double BackgroundModel::occupation(const PumpDrive& drive, double t) const {
  if (pl_strength == 0.0) return n_uniform;
  const double p = drive.amplitude * drive.envelope(t);
  const double p2 = p * p;
  return n_uniform + pl_strength * thermal_occupation() * p2 * p2;
}

bool BackgroundModel::time_independent(const PumpDrive& drive) const {
  return pl_strength == 0.0 || drive.kind == PumpKind::continuous || thermal_occupation() == 0.0;
}

MomentState MomentState::vacuum(double t) {
  MomentState m;
  m.time = t;
  return m;
}

Mat5 MomentState::doubled() const {
  Mat5 k = Mat5::Zero();
  k(0, 0) = normal(0, 0);
  for (int s = 1; s < kModes; ++s) {
    k(0, s) = std::conj(anomalous(0, s));
    k(s, 0) = anomalous(0, s);
    for (int r = 1; r < kModes; ++r) k(s, r) = normal(r, s) + (s == r ? 1.0 : 0.0);
  }
  return k;
}

MomentState MomentState::from_doubled(const Mat5& k, double t) {
  MomentState m;
  m.time = t;
  m.normal(0, 0) = k(0, 0);
  for (int s = 1; s < kModes; ++s) {
    const Complex a = std::conj(k(0, s));
    m.anomalous(0, s) = a;
    m.anomalous(s, 0) = a;
    for (int r = 1; r < kModes; ++r) m.normal(r, s) = k(s, r) - (s == r ? 1.0 : 0.0);
  }
  return m;
}

double MomentState::hermiticity_defect() const {
  return (normal - normal.adjoint()).cwiseAbs().maxCoeff();
}

double MomentState::anomalous_symmetry_defect() const {
  return (anomalous - anomalous.transpose()).cwiseAbs().maxCoeff();
}

double MomentState::min_population() const { return normal.diagonal().real().minCoeff(); }

double MomentState::decoupled_magnitude() const {
  double worst = std::abs(anomalous(0, 0));
  for (int s = 1; s < kModes; ++s) {
    worst = std::max({worst, std::abs(normal(0, s)), std::abs(normal(s, 0))});
    for (int r = 1; r < kModes; ++r) worst = std::max(worst, std::abs(anomalous(s, r)));
  }
  return worst;
}

std::vector<MomentState> propagate_moments(const MomentState& initial, const DriftModel& drift,
                                           const BackgroundModel& background,
                                           std::span<const double> grid,
                                           const StepControl& control) {
  background.validate();
  if (initial.hermiticity_defect() > 1e-10 || initial.min_population() < -1e-10 ||
      initial.anomalous_symmetry_defect() > 1e-10) {
    throw ConfigError("initial moments must be Hermitian with non-negative populations");
  }
  if (initial.decoupled_magnitude() > 1e-12) {
    throw ConfigError("initial moments outside the idler/signal pair subsystem must vanish");
  }

  const auto& p = drift.params();
  const PumpDrive& drive = drift.drive();
  const bool constant_noise = background.time_independent(drive);
  const Mat5 constant_d = doubled_diffusion(background.occupation(drive, initial.time), p.gamma_i, p.gamma_s);

  auto rhs = [&](double t, const Mat5& k) -> Mat5 {
    const Mat5 m = drift.carrier_free(t);
    Mat5 dk = m.conjugate() * k + k * m.transpose();
    if (constant_noise) {
      dk += constant_d;
    } else {
      dk += doubled_diffusion(background.occupation(drive, t), p.gamma_i, p.gamma_s);
    }
    return dk;
  };

  DormandPrince<Mat5> stepper(control);
  std::vector<MomentState> out;
  out.reserve(grid.size());
  Mat5 k = initial.doubled();
  double t = initial.time;
  for (double target : grid) {
    if (target < t) throw ConfigError("propagate_moments: grid times must be non-decreasing and >= initial time");
    k = stepper.advance(rhs, k, t, target);
    t = target;
    out.push_back(MomentState::from_doubled(k, t));
  }
  return out;
}

GreenMatrix propagate_green(const DriftModel& drift, double t_prime, double t,
                            const StepControl& control) {
  if (t < t_prime) throw ConfigError("propagate_green: requires t >= t'");
  GreenMatrix out;
  out.t = t;
  out.t_prime = t_prime;
  if (t == t_prime) return out;

  auto rhs = [&](double tau, const Mat5& g) -> Mat5 { return drift.carrier_free(tau) * g; };
  DormandPrince<Mat5> stepper(control);
  out.g = stepper.advance(rhs, Mat5::Identity(), t_prime, t);
  if (drift.params().omega_i != 0.0) out.g *= std::polar(1.0, -drift.params().omega_i * (t - t_prime));
  return out;
}

std::vector<Mat5> step_propagators(const DriftModel& drift, std::span<const double> grid,
                                   const StepControl& control) {
  std::vector<Mat5> steps;
  if (grid.size() < 2) return steps;
  steps.reserve(grid.size() - 1);

  auto rhs = [&](double tau, const Mat5& g) -> Mat5 { return drift.carrier_free(tau) * g; };
  const double h0 = grid[1] - grid[0];
  std::optional<Mat5> cached;
  DormandPrince<Mat5> stepper(control);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double h = grid[k + 1] - grid[k];
    if (h < 0.0) throw ConfigError("step_propagators: grid must be non-decreasing");
    // A constant drift on a uniform grid has one step propagator.
    if (drift.time_independent() && std::abs(h - h0) <= 1e-12 * std::max(1.0, h0)) {
      if (!cached) cached = stepper.advance(rhs, Mat5::Identity(), grid[0], grid[0] + h0);
      steps.push_back(*cached);
      continue;
    }
    steps.push_back(stepper.advance(rhs, Mat5::Identity(), grid[k], grid[k + 1]));
  }
  return steps;
}

TwoTimeCorrelators two_time_correlators(const MomentState& at_t1, const GreenMatrix& green) {
  if (green.t < green.t_prime) {
    throw ConfigError("two_time_correlators: requires t2 >= t1; use conjugate symmetry for t2 < t1");
  }
  if (std::abs(green.t_prime - at_t1.time) > 1e-9 * std::max(1.0, std::abs(at_t1.time))) {
    throw ConfigError("two_time_correlators: Green matrix must start at the moment time");
  }
  const Mat5 k = at_t1.doubled();
  // <P_a^+(t1) P_b(t2)> = (K G^T)_ab
  const Mat5 l = k * green.g.transpose();
  // <P_a(t1) P_b^+(t2)> = (Q G^H)_ab with Q_ac = <P_a P_c^+> = K_ca + [P_a, P_c^+]
  Mat5 q = k.transpose();
  q(0, 0) += 1.0;
  for (int s = 1; s < kModes; ++s) q(s, s) -= 1.0;
  const Mat5 r = q * green.g.adjoint();

  TwoTimeCorrelators out;
  out.t1 = green.t_prime;
  out.t2 = green.t;
  for (int m = 0; m < kSignals; ++m) out.pair(m) = l(0, m + 1);
  out.normal(0, 0) = l(0, 0);
  for (int s = 1; s < kModes; ++s) {
    for (int u = 1; u < kModes; ++u) out.normal(s, u) = r(s, u);
  }
  return out;
}

StabilityReport stability_check(double gamma_i, double gamma_s, double delta) {
  if (!(gamma_i > 0.0) || !(gamma_s > 0.0)) throw ConfigError("gamma_i and gamma_s must be > 0");
  const double margin = gamma_i * gamma_s - 4.0 * delta * delta;
  return {margin > 0.0, margin};
}

void DetectionWindow::validate() const {
  require_finite(start, "detection start");
  if (!std::isfinite(duration) || duration < 0.0) throw ConfigError("detection window must be >= 0");
  if (duration > 0.0) {
    if (!std::isfinite(step) || step <= 0.0) throw ConfigError("detection step must be > 0");
    const double n = duration / step;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
      throw ConfigError("detection window must be an integer multiple of the grid step");
    }
  }
}

std::vector<double> DetectionWindow::times() const {
  validate();
  if (duration == 0.0) return {start};
  const auto n = static_cast<std::size_t>(std::llround(duration / step));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = start + duration * static_cast<double>(i) / static_cast<double>(n);
  return t;
}

CorrelatorGrid correlator_grid(const DriftModel& drift, const BackgroundModel& background,
                               const DetectionWindow& window, const StepControl& control,
                               const MomentState& initial) {
  CorrelatorGrid grid;
  grid.times = window.times();
  const std::size_t n = grid.times.size();
  grid.moments = propagate_moments(initial, drift, background, grid.times, control);
  const std::vector<Mat5> steps = step_propagators(drift, grid.times, control);

  std::vector<Mat5> k(n);
  grid.idler_population.resize(n);
  grid.signal_normal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = grid.moments[i].doubled();
    grid.idler_population[i] = grid.moments[i].normal(0, 0).real();
    grid.signal_normal[i] = grid.moments[i].normal.bottomRightCorner<4, 4>();
  }

  const double omega_i = drift.params().omega_i;
  auto carrier = [&](std::size_t i1, std::size_t i2) {
    return std::polar(1.0, -omega_i * (grid.times[i2] - grid.times[i1]));
  };

  grid.pair.assign(n * n, Vec4::Zero());
  // t2 >= t1: <P_0^+(t1) P_m(t2)> = (G(t2, t1) u)_m with u_c = K_0c(t1).
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    Vec5 u = k[i1].row(0).transpose();
    for (std::size_t i2 = i1; i2 < n; ++i2) {
      if (i2 > i1) u = steps[i2 - 1] * u;
      grid.pair[i1 * n + i2] = u.tail<4>() * carrier(i1, i2);
    }
  }
  // t2 < t1: <P_0^+(t1) P_m(t2)> = conj(sum_c K_mc(t2) G_0c(t1, t2)).
  for (std::size_t i1 = 1; i1 < n; ++i1) {
    Vec5 row = Vec5::Zero();
    row(0) = 1.0;
    for (std::size_t j = i1; j-- > 0;) {
      row = steps[j].transpose() * row;  // row 0 of G(t1, t_j)
      const Vec5 c = k[j] * row;
      grid.pair[i1 * n + j] = c.tail<4>().conjugate() * carrier(i1, j);
    }
  }
  return grid;
}

}  // namespace pwsim
