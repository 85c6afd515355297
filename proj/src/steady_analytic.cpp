#include "pwsim/steady_analytic.hpp"

#include <cmath>
#include <sstream>

#include "pwsim/errors.hpp"

namespace pwsim {

namespace {

void require_rates(double gamma_i, double gamma_s, double delta) {
  if (!(gamma_i > 0.0) || !(gamma_s > 0.0)) throw ConfigError("gamma_i and gamma_s must be > 0");
  if (!std::isfinite(delta) || delta < 0.0) throw ConfigError("delta must be finite and >= 0");
}

// sinh(x)/x continued smoothly through x = 0.
double sinhc(double x) { return std::abs(x) < 1e-8 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }

}  // namespace

SpectralData spectral_data(double gamma_i, double gamma_s, double delta, double omega_i) {
  require_rates(gamma_i, gamma_s, delta);
  SpectralData s;
  const double diff = gamma_i - gamma_s;
  s.omega_cap = std::sqrt(diff * diff + 16.0 * delta * delta);
  s.lambda = Complex(-gamma_s, -omega_i);
  s.lambda_plus = 0.5 * (diff + s.omega_cap);
  s.lambda_minus = 0.5 * (diff - s.omega_cap);
  s.eigenvalues = {s.lambda, s.lambda, s.lambda, s.lambda - s.lambda_plus,
                   s.lambda - s.lambda_minus};
  return s;
}

GreenElements green_elements(double gamma_i, double gamma_s, double delta, double t) {
  require_rates(gamma_i, gamma_s, delta);
  if (!(t >= 0.0)) throw ConfigError("green_elements: t must be >= 0");
  const double diff = gamma_i - gamma_s;
  const double omega = std::sqrt(diff * diff + 16.0 * delta * delta);
  const double half = 0.5 * omega * t;
  const double decay = std::exp(-0.5 * diff * t);
  const double ch = std::cosh(half);
  // sinh(Omega t / 2) / Omega, finite at Omega = 0
  const double sh_over_omega = 0.5 * t * sinhc(half);

  GreenElements g;
  g.g_ii = decay * (ch - diff * sh_over_omega);
  g.g_is = -2.0 * kI * delta * decay * sh_over_omega;
  g.g_ss = 0.75 + 0.25 * decay * (ch + diff * sh_over_omega);
  g.g_ssp = g.g_ss - 1.0;
  return g;
}

Mat5 green_matrix(double gamma_i, double gamma_s, double delta, double omega_i, double t) {
  const GreenElements e = green_elements(gamma_i, gamma_s, delta, t);
  Mat5 g;
  g(0, 0) = e.g_ii;
  for (int s = 1; s < kModes; ++s) {
    g(0, s) = e.g_is;
    g(s, 0) = std::conj(e.g_is);
    for (int r = 1; r < kModes; ++r) g(s, r) = (s == r) ? e.g_ss : e.g_ssp;
  }
  return std::exp(Complex(-gamma_s, -omega_i) * t) * g;
}

SteadyMoments steady_moments(double gamma_i, double gamma_s, double delta, double n_b,
                             double guard) {
  require_rates(gamma_i, gamma_s, delta);
  if (!std::isfinite(n_b) || n_b < 0.0) throw ConfigError("n_b must be finite and >= 0");
  const double d2 = delta * delta;
  const double margin = gamma_i * gamma_s - 4.0 * d2;
  if (!(margin > guard)) {
    std::ostringstream os;
    os << "stability condition gamma_i*gamma_s > 4*delta^2 violated (margin " << margin
       << ", gamma_i=" << gamma_i << ", gamma_s=" << gamma_s << ", delta=" << delta
       << "); reduce delta below " << 0.5 * std::sqrt(gamma_i * gamma_s);
    throw StabilityError(os.str());
  }
  const double sum = gamma_i + gamma_s;

  SteadyMoments m;
  m.n_ii = n_b * gamma_i / sum * (gamma_s * sum - 4.0 * d2) / margin +
           (n_b + 1.0) * gamma_s / sum * 4.0 * d2 / margin;
  const double shared = (n_b + 1.0) * gamma_i / sum * d2 / margin +
                        n_b * gamma_s / (4.0 * sum) * (gamma_i * sum - 4.0 * d2) / margin;
  m.n_ss = shared + 0.75 * n_b;
  m.n_ssp = shared - 0.25 * n_b;
  m.n_is = kI * (2.0 * n_b + 1.0) * gamma_i * gamma_s * delta / (sum * margin);
  return m;
}

double entanglement_x(const SteadyMoments& m) {
  const double pair = std::norm(m.n_is);
  const double den = m.n_ii * m.n_ss + pair;
  if (!(den > 0.0)) {
    throw UndefinedStateError("entanglement_x: no emission (all moments vanish), X is undefined");
  }
  return (m.n_ii * m.n_ssp + pair) / den;
}

Mat4 steady_density_matrix(const SteadyMoments& m) {
  const double pair = std::norm(m.n_is);
  const double diag = m.n_ii * m.n_ss + pair;
  const double off = m.n_ii * m.n_ssp + pair;
  if (!(diag > 0.0)) throw UndefinedStateError("steady_density_matrix: no emission");
  Mat4 rho = Mat4::Constant(off);
  rho.diagonal().setConstant(diag);
  return rho / (4.0 * diag);
}

}  // namespace pwsim
