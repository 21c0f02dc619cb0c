#pragma once

#include <functional>

#include "robtrade/linalg.hpp"
#include "robtrade/models.hpp"

namespace robtrade {

/// Central-difference step for a coordinate: max(1e-6, 1e-6 |c|).
double fd_step(double coordinate);

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& at);
/// Jacobian with rows = outputs, columns = coordinates of `at`.
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& at);

/// max |a - r| / max(1, max |r|); +inf if either side has a NaN or shapes differ.
double relative_error(const Matrix& analytic, const Matrix& reference);

/// Block-wise relative errors of the analytic derivatives against central
/// differences: gradients from differences of the loss, hessian and mixed
/// blocks from differences of the analytic grad_theta.
struct DerivativeAudit {
  double grad_theta = 0.0;
  double grad_x = 0.0;
  double hessian_theta = 0.0;
  double mixed = 0.0;
  /// ||H - H^T||_max / max(||H||_max, tiny).
  double hessian_asymmetry = 0.0;

  double worst() const;
  bool passed(double tolerance) const { return worst() <= tolerance; }
};

DerivativeAudit finite_difference_audit(const LossModel& model, const Vector& theta,
                                        const Vector& x, double y);

}  // namespace robtrade
