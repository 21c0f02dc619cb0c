#include "robtrade/attack.hpp"

#include <cmath>
#include <string>

#include "robtrade/errors.hpp"
#include "robtrade/kernels.hpp"

namespace robtrade {

double AttackSpec::step_size() const {
  return pgd_step_size.value_or(2.5 * epsilon / static_cast<double>(pgd_steps));
}

void AttackSpec::validate() const {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw ArgumentError("attack epsilon must be finite and >= 0");
  }
  if (pgd_steps < 1) throw ArgumentError("pgd_steps must be >= 1");
  if (pgd_step_size && !(*pgd_step_size > 0.0 && std::isfinite(*pgd_step_size))) {
    throw ArgumentError("pgd_step_size must be > 0");
  }
}

Vector holder_direction(const Vector& grad_x, NormOrder p) {
  const double scale = grad_x.size() ? grad_x.cwiseAbs().maxCoeff() : 0.0;
  if (!(scale > 0.0)) throw DegenerateGradientError("input gradient is zero");
  if (!std::isfinite(scale)) throw DomainError("input gradient is not finite");

  const Index m = grad_x.size();
  Vector phi(m);
  if (p.is_infinity()) {
    for (Index k = 0; k < m; ++k) {
      phi(k) = grad_x(k) > 0.0 ? 1.0 : (grad_x(k) < 0.0 ? -1.0 : 0.0);
    }
    return phi;
  }
  if (p.is_two()) return grad_x / grad_x.norm();

  const double q = p.dual();
  const Vector b = grad_x.cwiseAbs() / scale;
  const double denom = std::pow(lp_norm(b, q), q - 1.0);
  for (Index k = 0; k < m; ++k) {
    const double mag = b(k) > 0.0 ? std::pow(b(k), q - 1.0) / denom : 0.0;
    phi(k) = grad_x(k) < 0.0 ? -mag : mag;
  }
  return phi;
}

Vector project_lp_ball(const Vector& v, double epsilon, NormOrder p) {
  if (epsilon < 0.0) throw ArgumentError("epsilon must be >= 0");
  if (p.is_infinity()) return v.cwiseMax(-epsilon).cwiseMin(epsilon);
  if (p.is_two()) {
    const double n = v.norm();
    if (n <= epsilon) return v;
    return v * (epsilon / n);
  }
  throw ArgumentError("projection supports p = 2 and p = inf only, got p = " + p.to_string());
}

namespace {

// Feasible point of the ball along the ray through v. Equals the projection
// for p = 2 and is used for other finite p, where the projection has no
// closed form.
Vector retract(const Vector& v, double epsilon, NormOrder p) {
  if (p.is_infinity() || p.is_two()) return project_lp_ball(v, epsilon, p);
  const double n = p.norm(v);
  if (n <= epsilon) return v;
  return v * (epsilon / n);
}

void check_point(const LossModel& model, const Vector& x) {
  if (x.size() != model.input_dim()) {
    throw DimensionError("input has " + std::to_string(x.size()) + " entries, expected " +
                         std::to_string(model.input_dim()));
  }
}

Vector input_gradient(const LossModel& model, const Vector& theta, const Vector& x, double y) {
  return *model.derivatives(theta, x, y, DerivativeKind::grad_x).grad_x;
}

bool is_zero(const Vector& v) { return v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

Perturbation linear_model_attack(const Vector& theta, const Vector& x, double y, double epsilon,
                                 NormOrder p) {
  if (theta.size() != x.size()) throw DimensionError("theta and x differ in length");
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw ArgumentError("epsilon must be >= 0");
  const double r = x.dot(theta) - y;
  Perturbation out;
  out.delta = Vector::Zero(x.size());
  if (epsilon > 0.0 && !is_zero(theta)) {
    const double s = r >= 0.0 ? 1.0 : -1.0;
    out.delta = s * epsilon * holder_direction(theta, p);
  }
  const double shifted = (x + out.delta).dot(theta) - y;
  out.loss = shifted * shifted;
  return out;
}

Perturbation pgd_attack(const LossModel& model, const Vector& theta, const Vector& x, double y,
                        const AttackSpec& spec) {
  spec.validate();
  check_point(model, x);
  const Index m = x.size();

  Perturbation best{Vector::Zero(m), model.loss(theta, x, y), false};
  if (spec.epsilon == 0.0) return best;

  const Vector g0 = input_gradient(model, theta, x, y);
  if (is_zero(g0)) {
    best.degenerate = true;
    return best;
  }

  const auto consider = [&](const Vector& delta) {
    const double value = model.loss(theta, x + delta, y);
    if (value > best.loss) {
      best.loss = value;
      best.delta = delta;
    }
  };

  consider(retract(spec.epsilon * holder_direction(g0, spec.p), spec.epsilon, spec.p));

  const double step = spec.step_size();
  Vector delta = Vector::Zero(m);
  Vector g = g0;
  for (int t = 0; t < spec.pgd_steps; ++t) {
    delta = retract(delta + step * holder_direction(g, spec.p), spec.epsilon, spec.p);
    consider(delta);
    if (t + 1 == spec.pgd_steps) break;
    g = input_gradient(model, theta, x + delta, y);
    if (is_zero(g)) break;
  }
  return best;
}

Perturbation corner_oracle_attack(const LossModel& model, const Vector& theta, const Vector& x,
                                  double y, double epsilon) {
  check_point(model, x);
  const Index m = x.size();
  if (m > kCornerOracleMaxDim) {
    throw RefusalError("corner oracle enumerates 2^m corners; m = " + std::to_string(m) +
                       " exceeds " + std::to_string(kCornerOracleMaxDim));
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw ArgumentError("epsilon must be >= 0");
  if (epsilon == 0.0) return {Vector::Zero(m), model.loss(theta, x, y), false};

  Perturbation best;
  bool have = false;
  Vector corner(m);
  const unsigned long count = 1ul << m;
  for (unsigned long mask = 0; mask < count; ++mask) {
    for (Index k = 0; k < m; ++k) corner(k) = (mask >> k) & 1ul ? epsilon : -epsilon;
    const double value = model.loss(theta, x + corner, y);
    if (!have || value > best.loss) {
      best.delta = corner;
      best.loss = value;
      have = true;
    }
  }
  return best;
}

std::string to_string(AttackSpec::Inner inner) {
  return inner == AttackSpec::Inner::pgd ? "pgd" : "auto";
}

AttackSpec::Inner parse_inner_solver(const std::string& text) {
  if (text == "auto") return AttackSpec::Inner::automatic;
  if (text == "pgd") return AttackSpec::Inner::pgd;
  throw ArgumentError("unknown inner solver '" + text + "' (expected auto or pgd)");
}

Perturbation best_attack(const LossModel& model, const Vector& theta, const Vector& x, double y,
                         const AttackSpec& spec) {
  spec.validate();
  check_point(model, x);
  if (spec.epsilon == 0.0) return {Vector::Zero(x.size()), model.loss(theta, x, y), false};
  if (spec.inner == AttackSpec::Inner::pgd) return pgd_attack(model, theta, x, y, spec);
  if (auto delta = model.exact_attack(theta, x, y, spec.epsilon, spec.p)) {
    const double value = model.loss(theta, x + *delta, y);
    return {std::move(*delta), value, false};
  }
  return pgd_attack(model, theta, x, y, spec);
}

InnerSolution solve_inner(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                          const AttackSpec& spec, Execution exec) {
  spec.validate();
  if (data.input_dim() != model.input_dim()) {
    throw DimensionError("dataset input dimension does not match the model");
  }
  const auto attacks = exec == Execution::serial
                           ? kernels::serial::attacks(model, theta, data, spec)
                           : kernels::omp::attacks(model, theta, data, spec);
  InnerSolution out;
  out.deltas.resize(data.size(), data.input_dim());
  out.losses.resize(data.size());
  for (Index i = 0; i < data.size(); ++i) {
    const auto& a = attacks[static_cast<std::size_t>(i)];
    out.deltas.row(i) = a.delta.transpose();
    out.losses(i) = a.loss;
    if (a.degenerate) out.degenerate_samples.push_back(i);
  }
  out.batch_value = kernels::ordered_mean(out.losses) + model.regularizer(theta);
  return out;
}

double adversarial_batch_loss(const LossModel& model, const Vector& theta,
                              const LabeledDataset& data, const AttackSpec& spec, Execution exec) {
  return solve_inner(model, theta, data, spec, exec).batch_value;
}

}  // namespace robtrade
