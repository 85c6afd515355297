#pragma once

#include <complex>

#include <Eigen/Core>

namespace pwsim {

using Complex = std::complex<double>;

/// Five-mode matrices over the doubled basis P = (p_i, p_s1^+, ..., p_s4^+).
using Mat5 = Eigen::Matrix<Complex, 5, 5>;
using Vec5 = Eigen::Matrix<Complex, 5, 1>;

/// Four-signal-channel matrices (tomography basis |1_i, 1_sn>).
using Mat4 = Eigen::Matrix<Complex, 4, 4>;
using Vec4 = Eigen::Matrix<Complex, 4, 1>;

inline constexpr Complex kI{0.0, 1.0};

inline constexpr int kModes = 5;
inline constexpr int kSignals = 4;
inline constexpr int kIdlerSlot = 0;

}  // namespace pwsim
