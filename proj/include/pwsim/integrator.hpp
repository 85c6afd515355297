#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include "pwsim/errors.hpp"

namespace pwsim {

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  ///< 0 selects a heuristic first step
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-12;  ///< relative to max(1, |t|)
  long max_steps = 50'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

/// Dormand-Prince 5(4) explicit Runge-Kutta with local extrapolation and FSAL.
///
/// `State` is any fixed- or dynamic-size Eigen dense object; `rhs(t, y)`
/// returns dy/dt. The error estimate is the max-norm of the embedded
/// difference scaled by abs_tol + rel_tol * max(|y|, |y_new|) entrywise.
/// Output times are hit exactly (no interpolation); successive calls through
/// DormandPrince keep the last accepted step size.
template <class State>
class DormandPrince {
 public:
  explicit DormandPrince(StepControl control = {}) : control_(control), h_(control.initial_step) {}

  const IntegrationStats& stats() const { return stats_; }

  /// Advances y from t0 to t1 (t1 >= t0).
  template <class Rhs>
  State advance(Rhs&& rhs, State y, double t0, double t1) {
    if (t1 < t0) throw NumericError("integrator: end time precedes start time");
    if (t1 == t0) return y;

    double t = t0;
    State k1 = rhs(t, y);
    ++stats_.rhs_evaluations;
    if (h_ <= 0.0) h_ = initial_step(y, k1, t1 - t0);

    long steps = 0;
    while (t < t1) {
      if (++steps > control_.max_steps) fail("step budget exhausted", t);
      double h = std::min({h_, control_.max_step, t1 - t});
      const bool last = (h == t1 - t);

      const State k2 = rhs(t + c2 * h, y + h * (a21 * k1));
      const State k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const State k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const State k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const State k6 =
          rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const State k7 = rhs(t + h, y_new);
      stats_.rhs_evaluations += 6;

      const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double scaled =
          (err.array().abs() /
           (control_.abs_tol + control_.rel_tol * y.array().abs().max(y_new.array().abs())))
              .maxCoeff();

      if (!std::isfinite(scaled)) fail("non-finite state", t);

      if (scaled <= 1.0) {
        ++stats_.accepted;
        t = last ? t1 : t + h;
        y = y_new;
        k1 = k7;
        const double grow = scaled == 0.0 ? kMaxGrow
                                          : std::clamp(kSafety * std::pow(scaled, -0.2),
                                                       kMinShrink, kMaxGrow);
        // Keep the unclipped proposal when this step was shortened to land on t1.
        if (!last || h == h_) h_ = h * grow;
      } else {
        ++stats_.rejected;
        h_ = h * std::max(kMinShrink, kSafety * std::pow(scaled, -0.2));
      }
      if (h_ < control_.min_step * std::max(1.0, std::abs(t))) fail("step-size underflow", t);
    }
    return y;
  }

 private:
  [[noreturn]] static void fail(const char* what, double t) {
    std::ostringstream os;
    os.precision(17);
    os << "integrator: " << what << " at t = " << t << " ps";
    throw NumericError(os.str());
  }

  double initial_step(const State& y, const State& f, double span) const {
    const double y_norm = y.array().abs().maxCoeff();
    const double f_norm = f.array().abs().maxCoeff();
    double h = 1e-2 * span;
    if (f_norm > 0.0) h = std::min(h, 1e-2 * std::max(y_norm, control_.abs_tol) / f_norm);
    return std::max(h, 1e-6 * span);
  }

  static constexpr double kSafety = 0.9;
  static constexpr double kMinShrink = 0.2;
  static constexpr double kMaxGrow = 5.0;

  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  // b - b_hat
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  StepControl control_;
  IntegrationStats stats_;
  double h_ = 0.0;
};

}  // namespace pwsim
