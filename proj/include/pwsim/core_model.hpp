#pragma once

#include <array>
#include <complex>
#include <vector>

#include "pwsim/types.hpp"

namespace pwsim {

// Units throughout: hbar = 1, frequencies and rates in rad/ps, time in ps,
// wave vectors in 1/um.

/// Material constants of the planar cavity. Mode frequencies are supplied per
/// wave vector (see ModeFrequencies) rather than through a dispersion model.
struct CavityParams {
  double omega_r = 0.0;  ///< Rabi frequency
  double n_sat = 1.0;    ///< exciton saturation density (model units)
  double v_xx = 0.0;     ///< exciton-exciton coupling, rad/ps per unit density

  /// Throws ConfigError unless omega_r > 0, n_sat > 0 and all values finite.
  void validate() const;
};

/// Bare photon and exciton frequencies at one in-plane wave vector.
struct ModeFrequencies {
  double omega_c = 0.0;
  double omega_x = 0.0;
};

/// One polariton branch: frequency plus exciton (x) and photon (c) Hopfield
/// coefficients. Coefficients are real with x >= 0.
struct BranchMode {
  double omega = 0.0;
  double x = 0.0;
  double c = 0.0;
};

struct HopfieldModes {
  BranchMode lower;
  BranchMode upper;
};

/// Diagonalizes the linear exciton-photon system at one wave vector.
///
/// The 2x2 generator acting on (b, a) is [[omega_x, -omega_r], [-omega_r, omega_c]];
/// the rows (x, c) of the returned branches form the orthogonal matrix that
/// diagonalizes it.
HopfieldModes hopfield_diagonalize(const CavityParams& params, const ModeFrequencies& bare);

/// Parabolic photon / flat exciton dispersion, for convenience when the nine
/// relevant frequencies are not given directly.
struct ParabolicDispersion {
  double omega_c0 = 0.0;   ///< photon frequency at k = 0
  double curvature = 0.0;  ///< rad/ps * um^2, omega_c(k) = omega_c0 + curvature * |k|^2
  double omega_x = 0.0;

  ModeFrequencies at(double k_magnitude) const;
};

/// Hopfield content entering the parametric coupling.
struct CouplingInputs {
  double x_idler = 0.0;
  double x_signal = 0.0;
  double x_pump = 0.0;
  double c_pump = 0.0;
};

/// Parametric coupling g_s = 2 x_i x_s x_p (omega_r / n_sat * c_p + v_xx * x_p).
double coupling_gs(const CouplingInputs& in, const CavityParams& params);

struct EffectiveCoupling {
  double g_s = 0.0;
  double delta = 0.0;  ///< g_s * amplitude^2
};

EffectiveCoupling make_effective_coupling(double g_s, double amplitude);

enum class PumpKind { continuous, gaussian };

struct PumpDrive {
  PumpKind kind = PumpKind::continuous;
  double amplitude = 0.0;  ///< peak semiclassical amplitude, dimensionless
  double omega_p = 0.0;
  double t0 = 4.0;     ///< pulse centre (gaussian only)
  double sigma = 1.0;  ///< envelope standard deviation (gaussian only)

  void validate() const;

  /// Real envelope in [0, 1]; identically 1 for continuous drive.
  double envelope(double t) const;
};

/// Complex pump amplitude amplitude * envelope(t) * exp(-i omega_p t).
Complex pump_amplitude(const PumpDrive& drive, double t);

struct WaveVector {
  double kx = 0.0;
  double ky = 0.0;

  double norm() const;
  friend WaveVector operator+(const WaveVector& a, const WaveVector& b) {
    return {a.kx + b.kx, a.ky + b.ky};
  }
  friend WaveVector operator-(const WaveVector& a, const WaveVector& b) {
    return {a.kx - b.kx, a.ky - b.ky};
  }
};

/// Four pumps at the corners (+-k_p, +-k_p), one idler at the origin and four
/// signals at |k| = 2 k_p, ordered counter-clockwise starting at (0, 2k_p).
struct PumpGeometry {
  double k_p = 0.0;
  std::array<WaveVector, 4> pumps{};
  std::array<WaveVector, 4> signals{};
  WaveVector idler{};
};

PumpGeometry make_square_geometry(double k_p);

/// A phase-matched two-pump process. `signal` is -1 when the pair total
/// equals the idler wave vector (opposite-corner pumps).
struct ScatteringProcess {
  int pump_a = 0;
  int pump_b = 0;
  int signal = -1;
};

/// Enumerates all six pump pairs and maps each onto the idler or onto the
/// unique signal with k_pa + k_pb = k_i + k_s. Throws GeometryError when a
/// pair matches nothing, when a signal is hit other than exactly once, or when
/// the pumps and signals are not at their nominal radii.
std::vector<ScatteringProcess> validate_geometry(const PumpGeometry& geom);

}  // namespace pwsim
