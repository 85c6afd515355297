#pragma once

#include "pwsim/langevin.hpp"
#include "pwsim/types.hpp"

namespace pwsim {

/// Post-selected signal density matrix over |1_i, 1_sn>, n = 1..4.
struct DensityMatrix4 {
  Mat4 rho = Mat4::Zero();
  double normalization = 0.0;  ///< trace of the un-normalized double integral
};

/// Time-integrated Wick-factorized coincidence matrix
///   rho_mn ~ sum_{t1,t2} w1 w2 [N_ii(t1) N_mn(t2) + C_m(t1,t2) conj(C_n(t1,t2))]
/// with composite-trapezoid weights on the stored grid, normalized to unit
/// trace. A one-point grid evaluates the integrand at coincidence.
/// Throws UndefinedStateError when nothing is emitted.
DensityMatrix4 reconstruct_rho(const CorrelatorGrid& grid);

/// Trapezoid weights for a sorted grid; a single point gets weight 1.
std::vector<double> trapezoid_weights(std::span<const double> times);

struct WMixture {
  double x_weight = 0.0;  ///< clamped to [0, 1]
  double x_raw = 0.0;     ///< least-squares value before clamping
  double residual = 0.0;  ///< || rho - fit ||_F
  double relative_residual = 0.0;
  bool w_form = true;     ///< false when relative_residual exceeds the threshold
};

struct FitOptions {
  double residual_threshold = 1e-3;  ///< relative to || rho ||_F
  double clamp_tolerance = 1e-6;
};

/// Least-squares projection of rho onto X * W + (1 - X) * I / 4 with
/// W the all-1/4 projector. Throws NumericError if the raw weight leaves
/// [-tol, 1 + tol].
WMixture fit_w_mixture(const DensityMatrix4& rho, const FitOptions& options = {});
WMixture fit_w_mixture(const Mat4& rho, const FitOptions& options = {});

struct RhoDiagnostics {
  double hermiticity_defect = 0.0;   ///< max |rho - rho^+|
  double trace_defect = 0.0;         ///< |tr rho - 1|
  double min_eigenvalue = 0.0;       ///< of the Hermitian part
  double diagonal_spread = 0.0;      ///< max pairwise |rho_mm - rho_nn|
  double offdiagonal_spread = 0.0;   ///< max pairwise distance among the 12 off-diagonals
};

RhoDiagnostics validate_rho(const Mat4& rho);

}  // namespace pwsim
