#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace eplab {

/// Entropy per step of a diagonal block crossing, (1/2) log 5.
inline const double kVarpi = 0.5 * std::log(5.0);

/// Entropy cost of crossing a block at a steeper angle, (1/2) log(9/5).
inline const double kVarsigma = 0.5 * std::log(9.0 / 5.0);

/// Unique maximiser of a -> kappa(a, 1).
inline constexpr double kAStar = 2.5;

/// Accepted critical density for directed percolation of the block field.
inline constexpr double kPercolationThreshold = 0.64;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace eplab
