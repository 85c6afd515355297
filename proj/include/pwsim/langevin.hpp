#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pwsim/core_model.hpp"
#include "pwsim/integrator.hpp"
#include "pwsim/types.hpp"

namespace pwsim {

// Slot layout of the doubled basis P = (p_i, p_s1^+, ..., p_s4^+). Physical
// moment matrices use the same ordering (i, s1, ..., s4) but refer to the
// annihilation operators of every mode.
enum class ModeIndex : int { idler = 0, s1 = 1, s2 = 2, s3 = 3, s4 = 4 };

enum class Frame { lab, rotating };

/// Frequencies, half damping rates (gamma = Gamma_tot / 2) and the parametric
/// coupling of the signal/idler system. Without an explicit omega_s the signals
/// sit on the resonance omega_i + omega_s = 2 omega_p.
struct DriftParams {
  double gamma_i = 1.0;
  double gamma_s = 1.0;
  double g_s = 0.0;
  double omega_i = 0.0;
  std::optional<double> omega_s;

  void validate() const;
  double signal_frequency(double omega_p) const;
};

struct DriftMatrix {
  Mat5 m = Mat5::Zero();
  Frame frame = Frame::rotating;
};

/// Lab frame: M(t) with -i*omega~_i on the idler diagonal, i*conj(omega~_s) on
/// the signal diagonal, -i g_s P(t)^2 along row 0 and +i g_s conj(P(t))^2 down
/// column 0, where omega~ = omega - i*gamma.
///
/// Rotating frame: T M T^-1 + dT/dt T^-1 with T = diag(1, e^{-2i omega_p t} x4);
/// for a resonant signal this is [[-gamma_i, -i Delta(t) ...], [i Delta(t), -gamma_s]]
/// - i omega_i I with Delta(t) = g_s |P(t)|^2, time-independent under
/// continuous drive.
DriftMatrix build_drift(const DriftParams& params, const PumpDrive& drive, double t, Frame frame);

/// Time-dependent rotating-frame drift for one parameter set and drive.
class DriftModel {
 public:
  DriftModel(DriftParams params, PumpDrive drive);

  const DriftParams& params() const { return params_; }
  const PumpDrive& drive() const { return drive_; }

  /// g_s * |P(t)|^2.
  double delta(double t) const;
  double peak_delta() const;
  bool time_independent() const { return drive_.kind == PumpKind::continuous; }

  /// Rotating-frame drift including the -i omega_i I carrier.
  Mat5 rotating(double t) const;

  /// rotating(t) + i omega_i I. The removed term is a multiple of the identity,
  /// so it only contributes the global phase exp(-i omega_i (t - t')) to G.
  Mat5 carrier_free(double t) const;

 private:
  DriftParams params_;
  PumpDrive drive_;
  double signal_detuning_ = 0.0;  // omega_s - 2 omega_p + omega_i
};

/// Uniform thermal background with half damping rates.
struct NoiseModel {
  double n_b = 0.0;
  double gamma_i = 1.0;
  double gamma_s = 1.0;
  double temperature_k = 0.0;

  void validate() const;
};

/// Delta-correlated Langevin noise strengths in the physical mode basis
/// (i, s1..s4): normal[x][y] ~ <F_x^+ F_y>, anti_normal[x][y] ~ <F_x F_y^+>,
/// anomalous ~ <F_x F_y> (identically zero for a thermal background).
struct DiffusionMatrices {
  Mat5 normal = Mat5::Zero();
  Mat5 anti_normal = Mat5::Zero();
  Mat5 anomalous = Mat5::Zero();
};

DiffusionMatrices diffusion_matrix(const NoiseModel& noise);

/// Background occupation seen by the signal/idler reservoirs.
///
/// n_b(t) = n_uniform + pl_strength * n_th(T) * |P(t)|^4, where
/// n_th(T) = 1 / (exp(E_a / k_B T) - 1) is a single-activation-energy thermal
/// factor. The pump-induced part models photoluminescence from pairs of pump
/// polaritons; its coefficients are phenomenological.
struct BackgroundModel {
  double n_uniform = 0.0;
  double temperature_k = 0.0;
  double activation_energy_mev = 1.0;
  double pl_strength = 0.0;

  void validate() const;
  double thermal_occupation() const;
  double occupation(const PumpDrive& drive, double t) const;
  bool time_independent(const PumpDrive& drive) const;
};

/// Equal-time second moments in the physical basis (i, s1..s4).
///
/// Only the pair subsystem is dynamical: N_ii, the signal block N_ss', and the
/// idler-signal anomalous entries A_is = A_si. The remaining entries
/// (idler-signal normal, idler-idler and signal-signal anomalous) are not
/// driven and stay zero when started from vacuum.
struct MomentState {
  double time = 0.0;
  Mat5 normal = Mat5::Zero();     ///< <p_x^+ p_y>
  Mat5 anomalous = Mat5::Zero();  ///< <p_x p_y>

  static MomentState vacuum(double t = 0.0);

  /// K_ab = <P_a^+ P_b> over the doubled basis.
  Mat5 doubled() const;
  static MomentState from_doubled(const Mat5& k, double t);

  double hermiticity_defect() const;
  double anomalous_symmetry_defect() const;
  double min_population() const;
  /// Largest entry outside the pair subsystem.
  double decoupled_magnitude() const;
};

/// Integrates dK/dt = conj(M) K + K M^T + D(t) for K = <P^+ P> and returns the
/// moments at every grid time. Grid times must be non-decreasing and not
/// earlier than initial.time.
std::vector<MomentState> propagate_moments(const MomentState& initial, const DriftModel& drift,
                                           const BackgroundModel& background,
                                           std::span<const double> grid,
                                           const StepControl& control = {});

struct GreenMatrix {
  Mat5 g = Mat5::Identity();
  double t = 0.0;
  double t_prime = 0.0;
};

/// Solves dG/dt = M(t) G, G(t', t') = I in the rotating frame.
GreenMatrix propagate_green(const DriftModel& drift, double t_prime, double t,
                            const StepControl& control = {});

/// G(t_{k+1}, t_k) for consecutive grid times, without the omega_i carrier.
std::vector<Mat5> step_propagators(const DriftModel& drift, std::span<const double> grid,
                                   const StepControl& control = {});

struct TwoTimeCorrelators {
  double t1 = 0.0;
  double t2 = 0.0;
  Vec4 pair = Vec4::Zero();  ///< <p_i^+(t1) p_sm^+(t2)>, m = 1..4
  Mat5 normal = Mat5::Zero();  ///< <p_x^+(t1) p_y(t2)>, physical basis
};

/// Quantum-regression evaluation for t2 >= t1 from the moments at t1 and
/// G(t2, t1). Noise after t1 is uncorrelated with operators at t1 and drops out.
TwoTimeCorrelators two_time_correlators(const MomentState& at_t1, const GreenMatrix& green);

struct StabilityReport {
  bool stable = false;
  double margin = 0.0;  ///< gamma_i * gamma_s - 4 delta^2
};

StabilityReport stability_check(double gamma_i, double gamma_s, double delta);

/// Uniform detection grid over [start, start + duration]. A zero duration is a
/// single coincidence sample at `start`.
struct DetectionWindow {
  double start = 0.0;
  double duration = 120.0;
  double step = 0.25;

  void validate() const;
  std::vector<double> times() const;
};

/// Everything the tomography needs on a detection grid.
struct CorrelatorGrid {
  std::vector<double> times;
  std::vector<double> idler_population;  ///< <p_i^+ p_i>(t)
  std::vector<Mat4> signal_normal;       ///< <p_sm^+ p_sn>(t)
  std::vector<Vec4> pair;                ///< row-major [t1][t2]: <p_i^+(t1) p_sm^+(t2)>
  std::vector<MomentState> moments;

  std::size_t size() const { return times.size(); }
  const Vec4& pair_at(std::size_t i1, std::size_t i2) const { return pair[i1 * times.size() + i2]; }
};

/// Propagates the moments from `initial` through the window and fills the
/// two-time pair table for all (t1, t2), using regression from the earlier
/// time in each ordering.
CorrelatorGrid correlator_grid(const DriftModel& drift, const BackgroundModel& background,
                               const DetectionWindow& window, const StepControl& control = {},
                               const MomentState& initial = MomentState::vacuum());

}  // namespace pwsim
