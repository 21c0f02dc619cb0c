#include "robtrade/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robtrade {

double fd_step(double coordinate) { return std::max(1e-6, 1e-6 * std::abs(coordinate)); }

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& at) {
  Vector g(at.size());
  Vector probe = at;
  for (Index k = 0; k < at.size(); ++k) {
    const double h = fd_step(at(k));
    probe(k) = at(k) + h;
    const double up = f(probe);
    probe(k) = at(k) - h;
    const double down = f(probe);
    probe(k) = at(k);
    g(k) = (up - down) / (2.0 * h);
  }
  return g;
}

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& at) {
  Matrix J;
  Vector probe = at;
  for (Index k = 0; k < at.size(); ++k) {
    const double h = fd_step(at(k));
    probe(k) = at(k) + h;
    const Vector up = f(probe);
    probe(k) = at(k) - h;
    const Vector down = f(probe);
    probe(k) = at(k);
    if (k == 0) J.resize(up.size(), at.size());
    J.col(k) = (up - down) / (2.0 * h);
  }
  return J;
}

double relative_error(const Matrix& analytic, const Matrix& reference) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (analytic.rows() != reference.rows() || analytic.cols() != reference.cols()) return inf;
  if (analytic.size() == 0) return 0.0;
  if (analytic.hasNaN() || reference.hasNaN()) return inf;
  const double scale = std::max(1.0, reference.cwiseAbs().maxCoeff());
  return (analytic - reference).cwiseAbs().maxCoeff() / scale;
}

double DerivativeAudit::worst() const {
  double w = std::max({grad_theta, grad_x, hessian_theta, mixed});
  return std::isnan(w) ? std::numeric_limits<double>::infinity() : w;
}

DerivativeAudit finite_difference_audit(const LossModel& model, const Vector& theta,
                                        const Vector& x, double y) {
  const auto analytic = model.derivatives(theta, x, y, DerivativeSet::all());

  const Vector fd_gtheta =
      fd_gradient([&](const Vector& t) { return model.loss(t, x, y); }, theta);
  const Vector fd_gx = fd_gradient([&](const Vector& xx) { return model.loss(theta, xx, y); }, x);
  const auto grad_theta_at = [&](const Vector& t, const Vector& xx) {
    return *model.derivatives(t, xx, y, DerivativeKind::grad_theta).grad_theta;
  };
  const Matrix fd_hess = fd_jacobian([&](const Vector& t) { return grad_theta_at(t, x); }, theta);
  const Matrix fd_mixed = fd_jacobian([&](const Vector& xx) { return grad_theta_at(theta, xx); }, x);

  DerivativeAudit audit;
  audit.grad_theta = relative_error(*analytic.grad_theta, fd_gtheta);
  audit.grad_x = relative_error(*analytic.grad_x, fd_gx);
  audit.hessian_theta = relative_error(*analytic.hessian_theta, fd_hess);
  audit.mixed = relative_error(*analytic.mixed, fd_mixed);

  const Matrix& H = *analytic.hessian_theta;
  const double hmax = H.size() ? H.cwiseAbs().maxCoeff() : 0.0;
  const double asym = H.size() ? (H - H.transpose()).cwiseAbs().maxCoeff() : 0.0;
  audit.hessian_asymmetry = hmax > 0.0 ? asym / hmax : asym;
  return audit;
}

}  // namespace robtrade
