#include "pwsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pwsim/errors.hpp"

namespace pwsim {

std::vector<double> trapezoid_weights(std::span<const double> times) {
  std::vector<double> w(times.size(), 0.0);
  if (times.size() == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double h = 0.5 * (times[i + 1] - times[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

DensityMatrix4 reconstruct_rho(const CorrelatorGrid& grid) {
  const std::size_t n = grid.size();
  if (n == 0 || grid.pair.size() != n * n || grid.idler_population.size() != n ||
      grid.signal_normal.size() != n) {
    throw ConfigError("reconstruct_rho: correlator grid is empty or inconsistent");
  }
  const std::vector<double> w = trapezoid_weights(grid.times);

  double idler_total = 0.0;
  Mat4 signal_total = Mat4::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    idler_total += w[i] * grid.idler_population[i];
    signal_total += w[i] * grid.signal_normal[i];
  }

  // Rows summed in fixed order so repeated runs agree bit for bit.
  Mat4 pair_total = Mat4::Zero();
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    Mat4 row = Mat4::Zero();
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const Vec4& c = grid.pair_at(i1, i2);
      row.noalias() += w[i2] * (c * c.adjoint());
    }
    pair_total += w[i1] * row;
  }

  const Mat4 raw = idler_total * signal_total + pair_total;
  const double trace = raw.trace().real();
  if (!std::isfinite(trace)) throw NumericError("reconstruct_rho: non-finite coincidence integral");
  if (!(trace > 0.0)) {
    throw UndefinedStateError("reconstruct_rho: zero coincidence rate, state is undefined");
  }
  return {raw / trace, trace};
}

WMixture fit_w_mixture(const DensityMatrix4& rho, const FitOptions& options) {
  return fit_w_mixture(rho.rho, options);
}

WMixture fit_w_mixture(const Mat4& rho, const FitOptions& options) {
  // Minimizing || rho - I/4 - X (J - I)/4 ||_F over real X gives
  // X = <(J - I)/4, rho - I/4> / ||(J - I)/4||^2 = (1/3) sum_{m != n} Re rho_mn.
  double off_sum = 0.0;
  for (int m = 0; m < kSignals; ++m) {
    for (int n = 0; n < kSignals; ++n) {
      if (m != n) off_sum += rho(m, n).real();
    }
  }
  WMixture out;
  out.x_raw = off_sum / 3.0;
  if (out.x_raw < -options.clamp_tolerance || out.x_raw > 1.0 + options.clamp_tolerance) {
    std::ostringstream os;
    os << "fit_w_mixture: fitted weight " << out.x_raw << " outside [0, 1]";
    throw NumericError(os.str());
  }
  out.x_weight = std::clamp(out.x_raw, 0.0, 1.0);

  Mat4 fit = Mat4::Constant(out.x_raw / 4.0);
  fit.diagonal().setConstant(0.25);
  out.residual = (rho - fit).norm();
  const double scale = rho.norm();
  out.relative_residual = scale > 0.0 ? out.residual / scale : out.residual;
  out.w_form = out.relative_residual <= options.residual_threshold;
  return out;
}

RhoDiagnostics validate_rho(const Mat4& rho) {
  RhoDiagnostics d;
  d.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_defect = std::abs(rho.trace() - 1.0);
  const Mat4 hermitian = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(hermitian, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();

  std::vector<Complex> off;
  for (int m = 0; m < kSignals; ++m) {
    for (int n = 0; n < kSignals; ++n) {
      if (m == n) {
        for (int k = 0; k < m; ++k) d.diagonal_spread = std::max(d.diagonal_spread, std::abs(rho(m, m) - rho(k, k)));
      } else {
        off.push_back(rho(m, n));
      }
    }
  }
  for (std::size_t a = 0; a < off.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) d.offdiagonal_spread = std::max(d.offdiagonal_spread, std::abs(off[a] - off[b]));
  }
  return d;
}

}  // namespace pwsim
