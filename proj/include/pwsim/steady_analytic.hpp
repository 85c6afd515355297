#pragma once

#include <array>

#include "pwsim/types.hpp"

namespace pwsim {

/// Closed-form spectrum of the rotating-frame drift for continuous pumping.
struct SpectralData {
  double omega_cap = 0.0;     ///< sqrt((gamma_i - gamma_s)^2 + 16 delta^2)
  Complex lambda;             ///< -gamma_s - i omega_i (threefold)
  double lambda_plus = 0.0;   ///< (gamma_i - gamma_s + Omega) / 2
  double lambda_minus = 0.0;  ///< (gamma_i - gamma_s - Omega) / 2
  std::array<Complex, 5> eigenvalues{};  ///< lambda x3, then lambda - lambda_+, lambda - lambda_-
};

SpectralData spectral_data(double gamma_i, double gamma_s, double delta, double omega_i = 0.0);

/// Green-function elements without the common factor exp(lambda t).
struct GreenElements {
  double g_ii = 0.0;
  Complex g_is;  ///< idler row entries; the signal column holds conj(g_is)
  double g_ss = 0.0;
  double g_ssp = 0.0;  ///< equals g_ss - 1
};

GreenElements green_elements(double gamma_i, double gamma_s, double delta, double t);

/// Full 5x5 rotating-frame propagator exp(lambda t) * block pattern.
Mat5 green_matrix(double gamma_i, double gamma_s, double delta, double omega_i, double t);

/// Long-time populations and correlators under a uniform background n_b.
struct SteadyMoments {
  double n_ii = 0.0;
  double n_ss = 0.0;
  double n_ssp = 0.0;  ///< <p_s^+ p_s'> for s != s'
  Complex n_is;        ///< <p_i^+ p_s^+>, purely imaginary
};

/// Throws StabilityError unless gamma_i * gamma_s - 4 delta^2 > guard.
SteadyMoments steady_moments(double gamma_i, double gamma_s, double delta, double n_b,
                             double guard = 1e-9);

/// W-state weight X = (n_ii n_ssp + |n_is|^2) / (n_ii n_ss + |n_is|^2).
/// Throws UndefinedStateError when the denominator vanishes (no emission).
double entanglement_x(const SteadyMoments& m);

/// Stationary post-selected density matrix (before normalization the diagonal
/// is n_ii n_ss + |n_is|^2 and every off-diagonal n_ii n_ssp + |n_is|^2),
/// normalized to unit trace.
Mat4 steady_density_matrix(const SteadyMoments& m);

}  // namespace pwsim
