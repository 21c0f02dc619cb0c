#pragma once

#include <vector>

#include "robtrade/linalg.hpp"

namespace robtrade {

/// Minimizer of q(delta) = delta^T A delta + 2 b^T delta over a norm ball,
/// A symmetric (possibly indefinite). Maximize by passing -A, -b.
struct QuadraticExtremum {
  Vector delta;
  double value = 0.0;
};

/// ||delta||_2 <= radius: the trust-region subproblem, solved through the
/// eigendecomposition of A, including the hard case.
QuadraticExtremum minimize_quadratic_ball(const Matrix& A, const Vector& b, double radius);

/// Feasible stationary points of q on the relative interiors of the 3^m faces
/// of the box |delta_k| <= radius, skipping faces whose restricted Hessian is
/// singular (their extrema recur on lower faces). Vertices are always listed.
/// Throws RefusalError above kBoxEnumerationMaxDim.
std::vector<QuadraticExtremum> box_stationary_points(const Matrix& A, const Vector& b,
                                                     double radius);

/// Global minimizer over the box, by enumeration of box_stationary_points.
QuadraticExtremum minimize_quadratic_box(const Matrix& A, const Vector& b, double radius);

inline constexpr Index kBoxEnumerationMaxDim = 8;

}  // namespace robtrade
