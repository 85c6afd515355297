#include "pwsim/core_model.hpp"

#include <cmath>
#include <string>

#include "pwsim/errors.hpp"

namespace pwsim {

void CavityParams::validate() const {
  if (!std::isfinite(omega_r) || !std::isfinite(n_sat) || !std::isfinite(v_xx)) {
    throw ConfigError("cavity parameters must be finite");
  }
  if (omega_r <= 0.0) throw ConfigError("omega_r must be > 0");
  if (n_sat <= 0.0) throw ConfigError("n_sat must be > 0");
}

HopfieldModes hopfield_diagonalize(const CavityParams& params, const ModeFrequencies& bare) {
  params.validate();
  if (!std::isfinite(bare.omega_c) || !std::isfinite(bare.omega_x)) {
    throw ConfigError("hopfield_diagonalize: bare mode frequencies must be finite");
  }
  const double mean = 0.5 * (bare.omega_c + bare.omega_x);
  const double half_detuning = 0.5 * (bare.omega_c - bare.omega_x);
  const double omega_r2 = params.omega_r * params.omega_r;
  const double root = std::hypot(half_detuning, params.omega_r);

  // (root + d)(root - d) = omega_r^2; take the well-conditioned factor first.
  double plus = 0.0;
  double minus = 0.0;
  if (half_detuning >= 0.0) {
    plus = root + half_detuning;
    minus = omega_r2 / plus;
  } else {
    minus = root - half_detuning;
    plus = omega_r2 / minus;
  }
  const double x_lower = std::sqrt(plus / (2.0 * root));
  const double c_lower = std::sqrt(minus / (2.0 * root));

  HopfieldModes modes;
  modes.lower = {mean - root, x_lower, c_lower};
  modes.upper = {mean + root, c_lower, -x_lower};
  return modes;
}

ModeFrequencies ParabolicDispersion::at(double k_magnitude) const {
  return {omega_c0 + curvature * k_magnitude * k_magnitude, omega_x};
}

double coupling_gs(const CouplingInputs& in, const CavityParams& params) {
  return 2.0 * in.x_idler * in.x_signal * in.x_pump *
         (params.omega_r / params.n_sat * in.c_pump + params.v_xx * in.x_pump);
}

EffectiveCoupling make_effective_coupling(double g_s, double amplitude) {
  return {g_s, g_s * amplitude * amplitude};
}

void PumpDrive::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw ConfigError("pump amplitude must be finite and >= 0");
  }
  if (!std::isfinite(omega_p)) throw ConfigError("omega_p must be finite");
  if (kind == PumpKind::gaussian) {
    if (!std::isfinite(sigma) || sigma <= 0.0) throw ConfigError("gaussian pulse sigma must be > 0");
    if (!std::isfinite(t0)) throw ConfigError("gaussian pulse t0 must be finite");
  }
}

double PumpDrive::envelope(double t) const {
  if (kind == PumpKind::continuous) return 1.0;
  const double u = (t - t0) / sigma;
  return std::exp(-0.5 * u * u);
}

Complex pump_amplitude(const PumpDrive& drive, double t) {
  return drive.amplitude * drive.envelope(t) * std::polar(1.0, -drive.omega_p * t);
}

double WaveVector::norm() const { return std::hypot(kx, ky); }

PumpGeometry make_square_geometry(double k_p) {
  PumpGeometry g;
  g.k_p = k_p;
  g.pumps = {WaveVector{k_p, k_p}, WaveVector{-k_p, k_p}, WaveVector{-k_p, -k_p},
             WaveVector{k_p, -k_p}};
  g.signals = {WaveVector{0.0, 2.0 * k_p}, WaveVector{-2.0 * k_p, 0.0},
               WaveVector{0.0, -2.0 * k_p}, WaveVector{2.0 * k_p, 0.0}};
  g.idler = {0.0, 0.0};
  return g;
}

namespace {

bool same_k(const WaveVector& a, const WaveVector& b, double tol) {
  return std::abs(a.kx - b.kx) <= tol && std::abs(a.ky - b.ky) <= tol;
}

}  // namespace

std::vector<ScatteringProcess> validate_geometry(const PumpGeometry& geom) {
  if (!(geom.k_p > 0.0)) throw GeometryError("k_p must be > 0");
  const double tol = 1e-12 * geom.k_p;

  for (int n = 0; n < 4; ++n) {
    const auto& k = geom.pumps[n];
    if (std::abs(std::abs(k.kx) - geom.k_p) > tol || std::abs(std::abs(k.ky) - geom.k_p) > tol) {
      throw GeometryError("pump " + std::to_string(n + 1) + " is not at (+-k_p, +-k_p)");
    }
    if (std::abs(geom.signals[n].norm() - 2.0 * geom.k_p) > tol) {
      throw GeometryError("signal " + std::to_string(n + 1) + " is not at |k| = 2 k_p");
    }
  }
  if (!same_k(geom.idler, WaveVector{}, tol)) throw GeometryError("idler must sit at k = (0, 0)");

  std::vector<ScatteringProcess> processes;
  std::array<int, 4> hits{};
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const WaveVector total = geom.pumps[a] + geom.pumps[b];
      if (same_k(total, geom.idler, tol)) {
        processes.push_back({a, b, -1});
        continue;
      }
      int match = -1;
      for (int s = 0; s < 4; ++s) {
        if (same_k(total, geom.idler + geom.signals[s], tol)) {
          match = s;
          break;
        }
      }
      if (match < 0) {
        throw GeometryError("pumps " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                            " violate momentum conservation k_pa + k_pb = k_i + k_s");
      }
      ++hits[match];
      processes.push_back({a, b, match});
    }
  }
  for (int s = 0; s < 4; ++s) {
    if (hits[s] != 1) {
      throw GeometryError("signal " + std::to_string(s + 1) + " is fed by " +
                          std::to_string(hits[s]) + " pump pairs, expected exactly one");
    }
  }
  return processes;
}

}  // namespace pwsim
