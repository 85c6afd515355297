#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "pwsim/errors.hpp"
#include "pwsim/langevin.hpp"

using namespace pwsim;

namespace {

DriftModel continuous_model(double gi, double gs, double delta, double omega_i = 0.0) {
  return DriftModel({gi, gs, delta, omega_i}, {PumpKind::continuous, 1.0, 0.0});
}

DriftModel gaussian_model(double delta_peak, double omega_i = 0.0) {
  return DriftModel({1.0, 1.0, delta_peak, omega_i}, {PumpKind::gaussian, 1.0, 0.0, 4.0, 1.0});
}

double max_abs(const Mat5& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("drift: decoupled rotating frame is diagonal") {
  const DriftParams p{1.5, 0.7, 0.0, 2.0};
  const DriftMatrix d = build_drift(p, {PumpKind::continuous, 1.0, 0.3}, 0.0, Frame::rotating);
  Mat5 expected = Mat5::Zero();
  expected(0, 0) = -1.5;
  for (int s = 1; s < kModes; ++s) expected(s, s) = -0.7;
  expected -= kI * 2.0 * Mat5::Identity();
  CHECK(max_abs(d.m - expected) < 1e-15);
}

TEST_CASE("drift: rotating-frame coupling entries") {
  const DriftParams p{1.0, 1.0, 0.1, 0.0};
  const PumpDrive drive{PumpKind::continuous, 2.0, 1.3};
  const DriftMatrix d = build_drift(p, drive, 0.7, Frame::rotating);
  for (int s = 1; s < kModes; ++s) {
    CHECK(std::abs(d.m(0, s) - Complex(0.0, -0.4)) < 1e-15);
    CHECK(std::abs(d.m(s, 0) - Complex(0.0, 0.4)) < 1e-15);
  }
  CHECK(std::abs(d.m(1, 2)) == 0.0);
}

TEST_CASE("drift: frame change reproduces the rotating build") {
  const DriftParams p{1.2, 0.8, 0.35, 0.9, 2.0 * 1.7 - 0.9 + 0.05};
  for (PumpKind kind : {PumpKind::continuous, PumpKind::gaussian}) {
    const PumpDrive drive{kind, 1.1, 1.7, 4.0, 1.0};
    for (double t : {0.0, 0.37, 3.2, 4.0, 6.5}) {
      const Mat5 lab = build_drift(p, drive, t, Frame::lab).m;
      const Mat5 rot = build_drift(p, drive, t, Frame::rotating).m;
      Mat5 tm = Mat5::Identity();
      Mat5 tdot_tinv = Mat5::Zero();
      for (int s = 1; s < kModes; ++s) {
        tm(s, s) = std::exp(-2.0 * kI * drive.omega_p * t);
        tdot_tinv(s, s) = -2.0 * kI * drive.omega_p;
      }
      const Mat5 oracle = tm * lab * tm.inverse() + tdot_tinv;
      CHECK(max_abs(oracle - rot) < 1e-12);
    }
  }
}

TEST_CASE("drift: invalid parameters") {
  CHECK_THROWS_AS(DriftParams({-1.0, 1.0, 0.1, 0.0}).validate(), ConfigError);
  CHECK_THROWS_AS(DriftParams({1.0, 0.0, 0.1, 0.0}).validate(), ConfigError);
}

TEST_CASE("noise: vacuum and thermal diffusion") {
  const DiffusionMatrices vac = diffusion_matrix({0.0, 1.0, 1.0});
  CHECK(max_abs(vac.normal) == 0.0);
  for (int x = 0; x < kModes; ++x) CHECK(vac.anti_normal(x, x) == Complex(2.0, 0.0));

  const DiffusionMatrices th = diffusion_matrix({0.5, 1.0, 1.0});
  for (int x = 0; x < kModes; ++x) {
    CHECK(th.normal(x, x) == Complex(1.0, 0.0));
    CHECK(th.anti_normal(x, x) == Complex(3.0, 0.0));
  }
  CHECK(max_abs(th.anomalous) == 0.0);
  CHECK(max_abs(th.normal - Mat5(th.normal.diagonal().asDiagonal())) == 0.0);

  CHECK_THROWS_AS(diffusion_matrix({-0.1, 1.0, 1.0}), ConfigError);
}

TEST_CASE("green: identity at equal times") {
  const GreenMatrix g = propagate_green(gaussian_model(0.4, 0.3), 2.5, 2.5);
  CHECK(g.g == Mat5::Identity());
}

TEST_CASE("green: constant drift matches the matrix exponential") {
  StepControl tight;
  tight.rel_tol = 1e-11;
  tight.abs_tol = 1e-14;
  for (double omega_i : {0.0, 1.3}) {
    const DriftModel model = continuous_model(1.0, 1.0, 0.4, omega_i);
    const Mat5 mbar = model.rotating(0.0);
    for (double tau : {0.0, 0.5, 1.0, 5.0, 10.0, 20.0}) {
      const Mat5 oracle = (mbar * tau).exp();
      CHECK(max_abs(propagate_green(model, 1.0, 1.0 + tau).g - oracle) < 1e-9);
      CHECK(max_abs(propagate_green(model, 1.0, 1.0 + tau, tight).g - oracle) < 1e-11);
    }
  }
  const DriftModel asym = continuous_model(2.0, 1.0, 0.6, 0.4);
  const Mat5 oracle = (asym.rotating(0.0) * 3.0).exp();
  CHECK(max_abs(propagate_green(asym, 0.0, 3.0).g - oracle) < 1e-9);
}

TEST_CASE("green: composition under continuous and gaussian drives") {
  for (const DriftModel& model : {continuous_model(1.0, 1.0, 0.4, 0.7), gaussian_model(0.45, 0.7)}) {
    const double t0 = 0.5;
    const double t2 = 9.0;
    const Mat5 direct = propagate_green(model, t0, t2).g;
    for (double t1 : {1.0, 3.9, 4.0, 6.25}) {
      const Mat5 composed = propagate_green(model, t1, t2).g * propagate_green(model, t0, t1).g;
      CHECK(max_abs(composed - direct) < 1e-8);
    }
  }
}

TEST_CASE("green: step propagators chain to the full propagator") {
  const DriftModel model = gaussian_model(0.3);
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(0.25 * k);
  const std::vector<Mat5> steps = step_propagators(model, grid);
  REQUIRE(steps.size() == grid.size() - 1);
  Mat5 chained = Mat5::Identity();
  for (const Mat5& s : steps) chained = s * chained;
  // step_propagators drop the carrier; omega_i = 0 here so the comparison is direct.
  CHECK(max_abs(chained - propagate_green(model, 0.0, 10.0).g) < 1e-8);
}

TEST_CASE("moments: drive-free vacuum stays empty") {
  const DriftModel model = continuous_model(1.0, 1.0, 0.0);
  const std::vector<double> grid{0.0, 1.0, 5.0, 20.0};
  for (const MomentState& m : propagate_moments(MomentState::vacuum(), model, {}, grid)) {
    CHECK(max_abs(m.normal) == 0.0);
    CHECK(max_abs(m.anomalous) == 0.0);
  }
}

TEST_CASE("moments: thermalization follows the scalar closed form") {
  const DriftModel model = continuous_model(1.0, 1.0, 0.0);
  BackgroundModel bg;
  bg.n_uniform = 0.5;
  std::vector<double> grid;
  for (int k = 0; k <= 30; ++k) grid.push_back(0.5 * k);
  const auto states = propagate_moments(MomentState::vacuum(), model, bg, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double oracle = 0.5 * (1.0 - std::exp(-2.0 * grid[k]));
    for (int x = 0; x < kModes; ++x) {
      CHECK(std::abs(states[k].normal(x, x) - oracle) < 1e-9);
    }
    CHECK(std::abs(states[k].normal(1, 2)) < 1e-15);
  }
}

TEST_CASE("moments: continuous pump approaches the stationary values") {
  const DriftModel model = continuous_model(1.0, 1.0, 0.4);
  const std::vector<double> grid{40.0};
  const MomentState m = propagate_moments(MomentState::vacuum(), model, {}, grid).back();
  CHECK(m.normal(0, 0).real() == doctest::Approx(8.0 / 9.0).epsilon(1e-6));
  CHECK(m.normal(1, 1).real() == doctest::Approx(2.0 / 9.0).epsilon(1e-6));
  CHECK(m.normal(1, 3).real() == doctest::Approx(2.0 / 9.0).epsilon(1e-6));
  CHECK(std::abs(m.anomalous(0, 2)) == doctest::Approx(5.0 / 9.0).epsilon(1e-6));
  CHECK(m.decoupled_magnitude() == 0.0);
}

TEST_CASE("moments: hermiticity and positivity along a pulse") {
  const DriftModel model = gaussian_model(0.6, 0.5);
  BackgroundModel bg;
  bg.n_uniform = 0.2;
  bg.temperature_k = 15.0;
  bg.pl_strength = 1.0;
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(0.25 * k);
  for (const MomentState& m : propagate_moments(MomentState::vacuum(), model, bg, grid)) {
    CHECK(m.hermiticity_defect() < 1e-10);
    CHECK(m.anomalous_symmetry_defect() < 1e-10);
    CHECK(m.min_population() >= -1e-10);
  }
}

TEST_CASE("moments: input validation") {
  const DriftModel model = continuous_model(1.0, 1.0, 0.2);
  MomentState bad = MomentState::vacuum();
  bad.normal(0, 1) = 0.1;
  const std::vector<double> grid{1.0};
  CHECK_THROWS_AS(propagate_moments(bad, model, {}, grid), ConfigError);
  const std::vector<double> backwards{2.0, 1.0};
  CHECK_THROWS_AS(propagate_moments(MomentState::vacuum(), model, {}, backwards), ConfigError);
}

TEST_CASE("moments: doubled round trip") {
  MomentState m = MomentState::vacuum(3.0);
  m.normal(0, 0) = 0.7;
  m.normal(1, 2) = Complex(0.1, 0.2);
  m.normal(2, 1) = Complex(0.1, -0.2);
  m.anomalous(0, 3) = m.anomalous(3, 0) = Complex(0.0, 0.4);
  const MomentState back = MomentState::from_doubled(m.doubled(), 3.0);
  CHECK(max_abs(back.normal - m.normal) < 1e-15);
  CHECK(max_abs(back.anomalous - m.anomalous) < 1e-15);
}

TEST_CASE("two-time: coincidence reduces to equal-time moments") {
  const DriftModel model = continuous_model(1.0, 1.0, 0.3, 0.8);
  BackgroundModel bg;
  bg.n_uniform = 0.4;
  const std::vector<double> grid{7.0};
  const MomentState m = propagate_moments(MomentState::vacuum(), model, bg, grid).back();
  GreenMatrix g;
  g.t = g.t_prime = 7.0;
  const TwoTimeCorrelators c = two_time_correlators(m, g);
  for (int s = 1; s < kModes; ++s) {
    CHECK(std::abs(c.pair(s - 1) - std::conj(m.anomalous(0, s))) < 1e-15);
  }
  CHECK(max_abs(c.normal - m.normal) < 1e-15);

  GreenMatrix backwards;
  backwards.t = 6.0;
  backwards.t_prime = 7.0;
  CHECK_THROWS_AS(two_time_correlators(m, backwards), ConfigError);
}

TEST_CASE("two-time: no coupling, no pairs") {
  const DriftModel model = continuous_model(1.0, 1.0, 0.0);
  BackgroundModel bg;
  bg.n_uniform = 0.3;
  DetectionWindow w{0.0, 5.0, 0.5};
  const CorrelatorGrid grid = correlator_grid(model, bg, w);
  for (const Vec4& c : grid.pair) CHECK(c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-time: stationary pair correlator") {
  const DriftModel model = continuous_model(1.0, 1.0, 0.4, 0.6);
  DetectionWindow w{60.0, 2.0, 0.5};
  const CorrelatorGrid grid = correlator_grid(model, {}, w);
  const std::size_t n = grid.size();
  REQUIRE(n == 5);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(grid.pair_at(i, i)(0)) == doctest::Approx(5.0 / 9.0).epsilon(1e-8));
  }
  // Stationarity: the table depends on t2 - t1 only.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      CHECK((grid.pair_at(i, j) - grid.pair_at(i + 1, j + 1)).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  // All four signal channels see the same correlator.
  for (const Vec4& c : grid.pair) {
    for (int m = 1; m < kSignals; ++m) CHECK(std::abs(c(m) - c(0)) < 1e-12);
  }
}

TEST_CASE("two-time: reversed ordering matches direct regression") {
  // For t2 < t1 the table is regressed from t2; cross-check one entry against
  // an explicit Heisenberg-picture evaluation through the doubled moments.
  const DriftModel model = gaussian_model(0.4, 0.9);
  BackgroundModel bg;
  bg.n_uniform = 0.1;
  DetectionWindow w{2.0, 4.0, 0.5};
  const CorrelatorGrid grid = correlator_grid(model, bg, w);
  const std::size_t i2 = 1;
  const std::size_t i1 = 6;
  const Mat5 k2 = grid.moments[i2].doubled();
  const Mat5 g = propagate_green(model, grid.times[i2], grid.times[i1]).g;
  for (int m = 1; m < kModes; ++m) {
    Complex sum = 0.0;
    for (int c = 0; c < kModes; ++c) sum += k2(m, c) * g(0, c);
    CHECK(std::abs(grid.pair_at(i1, i2)(m - 1) - std::conj(sum)) < 1e-9);
  }
}

TEST_CASE("stability: boundary examples") {
  const StabilityReport a = stability_check(1.0, 1.0, 0.4);
  CHECK(a.stable);
  CHECK(a.margin == doctest::Approx(0.36).epsilon(1e-14));
  const StabilityReport b = stability_check(1.0, 1.0, 0.5);
  CHECK_FALSE(b.stable);
  CHECK(b.margin == 0.0);
}

TEST_CASE("stability: spectrum sign agrees with the analytic criterion") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> gamma(0.2, 2.0);
  std::uniform_real_distribution<double> rel(0.5, 1.5);
  int stable_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double gi = gamma(rng);
    const double gs = gamma(rng);
    const double delta = rel(rng) * 0.5 * std::sqrt(gi * gs);
    const StabilityReport r = stability_check(gi, gs, delta);
    if (std::abs(r.margin) < 1e-6) continue;
    Eigen::ComplexEigenSolver<Mat5> es(continuous_model(gi, gs, delta, 0.3).rotating(0.0));
    const double max_re = es.eigenvalues().real().maxCoeff();
    CHECK((max_re < 0.0) == r.stable);
    stable_count += r.stable ? 1 : 0;
  }
  CHECK(stable_count > 20);
  CHECK(stable_count < 180);
}

TEST_CASE("detection window") {
  DetectionWindow w{0.0, 120.0, 0.25};
  const auto t = w.times();
  CHECK(t.size() == 481);
  CHECK(t.back() == 120.0);
  CHECK(DetectionWindow{5.0, 0.0, 0.25}.times() == std::vector<double>{5.0});
  CHECK_THROWS_AS((DetectionWindow{0.0, 1.0, 0.3}.validate()), ConfigError);
  CHECK_THROWS_AS((DetectionWindow{0.0, -1.0, 0.25}.validate()), ConfigError);
}
