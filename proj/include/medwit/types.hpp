// types.hpp — Shared numeric aliases and tolerances.

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace medwit {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Validation tolerance for states and operators.
inline constexpr double kDefaultTol = 1e-8;

// Largest composite Hilbert-space dimension accepted unless overridden.
inline constexpr Index kDefaultDimCap = 4096;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace medwit
