#include "sample_ops.hpp"

#include <algorithm>
#include <cmath>

#include "robtrade/attack.hpp"

namespace robtrade::kernels {

namespace detail {

Vector input_at(const SampleInputs& in, Index i) {
  Vector x = in.data.x(i);
  if (in.deltas != nullptr) x += in.deltas->row(i).transpose();
  return x;
}

double sample_loss(const SampleInputs& in, Index i) {
  return in.model.loss(in.theta, input_at(in, i), in.data.y(i));
}

Vector sample_gradient(const SampleInputs& in, Index i) {
  return *in.model.derivatives(in.theta, input_at(in, i), in.data.y(i), DerivativeKind::grad_theta)
              .grad_theta;
}

Matrix sample_hessian(const SampleInputs& in, Index i) {
  return *in.model
              .derivatives(in.theta, input_at(in, i), in.data.y(i), DerivativeKind::hessian_theta)
              .hessian_theta;
}

Perturbation sample_attack(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                           const AttackSpec& spec, Index i) {
  return best_attack(model, theta, data.x(i), data.y(i), spec);
}

SamplePieces sample_pieces(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                           const AttackSpec& spec, double best_value, double tolerance, Index i) {
  SamplePieces out;
  if (spec.epsilon == 0.0 || spec.inner == AttackSpec::Inner::pgd) return out;
  const Vector x = data.x(i);
  const double y = data.y(i);
  const double floor = best_value - tolerance * std::max(1.0, std::abs(best_value));
  for (const auto& delta : model.attack_candidates(theta, x, y, spec.epsilon, spec.p)) {
    const Vector xa = x + delta;
    const double v = model.loss(theta, xa, y);
    if (v < floor) continue;
    out.push_back({v, *model.derivatives(theta, xa, y, DerivativeKind::grad_theta).grad_theta});
  }
  return out;
}

PhiTerm sample_phi_term(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                        NormOrder p, double degenerate_tol, Index i) {
  const auto der = model.derivatives(theta, data.x(i), data.y(i),
                                     DerivativeKind::grad_x | DerivativeKind::mixed);
  const Vector& gx = *der.grad_x;
  if (gx.cwiseAbs().maxCoeff() <= degenerate_tol) return std::nullopt;
  return Vector(*der.mixed * holder_direction(gx, p));
}

}  // namespace detail

double ordered_mean(const Vector& values) {
  double sum = 0.0;
  for (Index i = 0; i < values.size(); ++i) sum += values(i);
  return sum / static_cast<double>(values.size());
}

Vector ordered_row_mean(const Matrix& rows) {
  Vector sum = Vector::Zero(rows.cols());
  for (Index i = 0; i < rows.rows(); ++i) sum += rows.row(i).transpose();
  return sum / static_cast<double>(rows.rows());
}

Matrix ordered_mean(const std::vector<Matrix>& terms) {
  Matrix sum = Matrix::Zero(terms.front().rows(), terms.front().cols());
  for (const auto& t : terms) sum += t;
  return sum / static_cast<double>(terms.size());
}

}  // namespace robtrade::kernels
