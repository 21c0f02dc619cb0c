#include "robtrade/models.hpp"

#include <cmath>
#include <string>

#include "robtrade/attack.hpp"
#include "robtrade/errors.hpp"
#include "robtrade/quadratic_extrema.hpp"
#include "robtrade/io.hpp"
#include "robtrade/rng.hpp"

namespace robtrade {

namespace {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double softplus(double s) { return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))); }

}  // namespace

// ---------------------------------------------------------------- LossModel

ParameterLayout LossModel::layout() const {
  return {ParameterBlock{"theta", 0, {param_dim()}}};
}

void LossModel::check_arguments(const Vector& theta, const Vector& x, double y) const {
  if (theta.size() != param_dim()) {
    throw DimensionError(name() + ": theta has " + std::to_string(theta.size()) +
                         " entries, expected " + std::to_string(param_dim()));
  }
  if (x.size() != input_dim()) {
    throw DimensionError(name() + ": x has " + std::to_string(x.size()) + " entries, expected " +
                         std::to_string(input_dim()));
  }
  if (!theta.allFinite() || !x.allFinite() || !std::isfinite(y)) {
    throw DomainError(name() + ": non-finite input");
  }
}

double LossModel::loss(const Vector& theta, const Vector& x, double y) const {
  check_arguments(theta, x, y);
  return loss_impl(theta, x, y);
}

Derivatives LossModel::derivatives(const Vector& theta, const Vector& x, double y,
                                   DerivativeSet which) const {
  check_arguments(theta, x, y);
  return derivatives_impl(theta, x, y, which);
}

Vector LossModel::regularizer_gradient(const Vector& theta) const {
  return Vector::Zero(theta.size());
}

Matrix LossModel::regularizer_hessian(const Vector& theta) const {
  return Matrix::Zero(theta.size(), theta.size());
}

Vector LossModel::initial_parameters(std::uint64_t /*seed*/) const {
  return Vector::Zero(param_dim());
}

ParameterVector make_parameters(const LossModel& model, Vector values) {
  if (values.size() != model.param_dim()) {
    throw DimensionError("parameter vector size does not match " + model.name());
  }
  return ParameterVector(std::move(values), model.layout());
}

// -------------------------------------------------------------- LinearModel

LinearModel::LinearModel(Index input_dim) : m_(input_dim) {
  if (m_ < 1) throw ArgumentError("linear model needs input_dim >= 1");
}

double LinearModel::loss_impl(const Vector& theta, const Vector& x, double y) const {
  const double r = x.dot(theta) - y;
  return r * r;
}

Derivatives LinearModel::derivatives_impl(const Vector& theta, const Vector& x, double y,
                                          DerivativeSet which) const {
  const double r = x.dot(theta) - y;
  Derivatives out;
  if (which.has(DerivativeKind::grad_theta)) out.grad_theta = 2.0 * r * x;
  if (which.has(DerivativeKind::grad_x)) out.grad_x = 2.0 * r * theta;
  if (which.has(DerivativeKind::hessian_theta)) out.hessian_theta = 2.0 * x * x.transpose();
  if (which.has(DerivativeKind::mixed)) {
    Matrix mixed = 2.0 * x * theta.transpose();
    mixed.diagonal().array() += 2.0 * r;
    out.mixed = std::move(mixed);
  }
  return out;
}

std::optional<Vector> LinearModel::exact_attack(const Vector& theta, const Vector& x, double y,
                                                double epsilon, NormOrder p) const {
  return linear_model_attack(theta, x, y, epsilon, p).delta;
}

// ------------------------------------------------------------ LocationModel

LocationModel::LocationModel(Index input_dim) : m_(input_dim) {
  if (m_ < 1) throw ArgumentError("location model needs input_dim >= 1");
}

double LocationModel::loss_impl(const Vector& theta, const Vector& x, double /*y*/) const {
  return 0.5 * (theta - x).squaredNorm();
}

Derivatives LocationModel::derivatives_impl(const Vector& theta, const Vector& x, double /*y*/,
                                            DerivativeSet which) const {
  const Vector u = theta - x;
  Derivatives out;
  if (which.has(DerivativeKind::grad_theta)) out.grad_theta = u;
  if (which.has(DerivativeKind::grad_x)) out.grad_x = -u;
  if (which.has(DerivativeKind::hessian_theta)) out.hessian_theta = Matrix::Identity(m_, m_);
  if (which.has(DerivativeKind::mixed)) out.mixed = -Matrix::Identity(m_, m_);
  return out;
}

std::optional<Vector> LocationModel::exact_attack(const Vector& theta, const Vector& x,
                                                  double /*y*/, double epsilon,
                                                  NormOrder p) const {
  // Push x + delta away from theta; ties (u_k = 0) move in the negative direction.
  const Vector u = theta - x;
  if (p.is_infinity()) {
    Vector delta(m_);
    for (Index k = 0; k < m_; ++k) delta(k) = u(k) >= 0.0 ? -epsilon : epsilon;
    return delta;
  }
  if (p.is_two()) {
    const double norm = u.norm();
    if (norm == 0.0) {
      Vector delta = Vector::Zero(m_);
      delta(0) = -epsilon;
      return delta;
    }
    return Vector(-epsilon * u / norm);
  }
  return std::nullopt;
}

// ----------------------------------------------------------- ShallowQuadNet

ShallowQuadNet::ShallowQuadNet(Index input_dim, std::vector<double> a, double mu)
    : m_(input_dim), a_(std::move(a)), mu_(mu) {
  if (m_ < 1) throw ArgumentError("quadnet needs input_dim >= 1");
  if (a_.empty()) throw ArgumentError("quadnet needs at least one hidden unit");
  for (double aj : a_) {
    if (!std::isfinite(aj)) throw ArgumentError("quadnet output weights must be finite");
  }
  if (!(mu_ > 0.0) || !std::isfinite(mu_)) throw ArgumentError("quadnet needs mu > 0");
}

ParameterLayout ShallowQuadNet::layout() const {
  ParameterLayout layout;
  for (Index j = 0; j < k(); ++j) {
    layout.push_back(ParameterBlock{"w_" + std::to_string(j + 1), j * m_, {m_}});
  }
  return layout;
}

double ShallowQuadNet::predict(const Vector& theta, const Vector& x) const {
  double f = 0.0;
  for (Index j = 0; j < k(); ++j) {
    const double z = theta.segment(j * m_, m_).dot(x);
    f += a_[j] * z * z;
  }
  return f;
}

double ShallowQuadNet::loss_impl(const Vector& theta, const Vector& x, double y) const {
  const double r = y - predict(theta, x);
  return r * r;
}

Derivatives ShallowQuadNet::derivatives_impl(const Vector& theta, const Vector& x, double y,
                                             DerivativeSet which) const {
  const Index d = param_dim();
  Vector z(k());
  for (Index j = 0; j < k(); ++j) z(j) = theta.segment(j * m_, m_).dot(x);
  double f = 0.0;
  for (Index j = 0; j < k(); ++j) f += a_[j] * z(j) * z(j);
  const double r = y - f;

  // df/dtheta, block j = 2 a_j z_j x;  df/dx = sum_j 2 a_j z_j w_j.
  Vector df_dtheta(d);
  Vector df_dx = Vector::Zero(m_);
  for (Index j = 0; j < k(); ++j) {
    df_dtheta.segment(j * m_, m_) = 2.0 * a_[j] * z(j) * x;
    df_dx += 2.0 * a_[j] * z(j) * theta.segment(j * m_, m_);
  }

  Derivatives out;
  if (which.has(DerivativeKind::grad_theta)) out.grad_theta = -2.0 * r * df_dtheta;
  if (which.has(DerivativeKind::grad_x)) out.grad_x = -2.0 * r * df_dx;
  if (which.has(DerivativeKind::hessian_theta)) {
    // 2 grad f grad f^T - 2 r blockdiag(2 a_j x x^T)
    Matrix H = 2.0 * df_dtheta * df_dtheta.transpose();
    const Matrix xxT = x * x.transpose();
    for (Index j = 0; j < k(); ++j) {
      H.block(j * m_, j * m_, m_, m_) -= 4.0 * r * a_[j] * xxT;
    }
    out.hessian_theta = std::move(H);
  }
  if (which.has(DerivativeKind::mixed)) {
    // 2 grad_theta f grad_x f^T - 2 r d(grad_theta f)/dx,
    // d(grad_{w_j} f)/dx = 2 a_j (x w_j^T + z_j I).
    Matrix mixed = 2.0 * df_dtheta * df_dx.transpose();
    for (Index j = 0; j < k(); ++j) {
      Matrix block = x * theta.segment(j * m_, m_).transpose();
      block.diagonal().array() += z(j);
      mixed.block(j * m_, 0, m_, m_) -= 4.0 * r * a_[j] * block;
    }
    out.mixed = std::move(mixed);
  }
  return out;
}

std::vector<Vector> ShallowQuadNet::attack_candidates(const Vector& theta, const Vector& x,
                                                      double /*y*/, double epsilon,
                                                      NormOrder p) const {
  const bool box = p.is_infinity();
  if (!box && !p.is_two()) return {};
  if (box && m_ > kBoxEnumerationMaxDim) return {};
  Matrix A = Matrix::Zero(m_, m_);
  for (Index j = 0; j < k(); ++j) {
    const auto w = theta.segment(j * m_, m_);
    A.noalias() += a_[static_cast<std::size_t>(j)] * (w * w.transpose());
  }
  // f(x + delta) = c + q(delta) with q(delta) = delta^T A delta + 2 (A x)^T delta.
  const Vector b = A * x;
  std::vector<Vector> out;
  if (box) {
    for (auto& pt : box_stationary_points(A, b, epsilon)) out.push_back(std::move(pt.delta));
  } else {
    out.push_back(minimize_quadratic_ball(A, b, epsilon).delta);
    out.push_back(minimize_quadratic_ball(-A, -b, epsilon).delta);
  }
  return out;
}

std::optional<Vector> ShallowQuadNet::exact_attack(const Vector& theta, const Vector& x, double y,
                                                   double epsilon, NormOrder p) const {
  auto candidates = attack_candidates(theta, x, y, epsilon, p);
  if (candidates.empty()) return std::nullopt;
  std::size_t best = 0;
  double best_loss = loss_impl(theta, x + candidates[0], y);
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const double v = loss_impl(theta, x + candidates[c], y);
    if (v > best_loss) {
      best_loss = v;
      best = c;
    }
  }
  return std::move(candidates[best]);
}

double ShallowQuadNet::regularizer(const Vector& theta) const {
  return 0.5 * mu_ * theta.squaredNorm();
}

Vector ShallowQuadNet::regularizer_gradient(const Vector& theta) const { return mu_ * theta; }

Matrix ShallowQuadNet::regularizer_hessian(const Vector& theta) const {
  return mu_ * Matrix::Identity(theta.size(), theta.size());
}

Vector ShallowQuadNet::initial_parameters(std::uint64_t seed) const {
  SeededStream rng(seed);
  return rng.normal_vector(param_dim()) / std::sqrt(static_cast<double>(m_));
}

std::vector<std::pair<std::string, std::string>> ShallowQuadNet::describe() const {
  std::string a_text;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    if (j) a_text += ",";
    a_text += format_double(a_[j]);
  }
  return {{"k", std::to_string(k())}, {"a", a_text}, {"mu", format_double(mu_)}};
}

// ------------------------------------------------------------ LogisticModel

LogisticModel::LogisticModel(Index input_dim) : m_(input_dim) {
  if (m_ < 1) throw ArgumentError("logistic model needs input_dim >= 1");
}

ParameterLayout LogisticModel::layout() const {
  return {ParameterBlock{"w", 0, {m_}}, ParameterBlock{"b", m_, {1}}};
}

double LogisticModel::loss_impl(const Vector& theta, const Vector& x, double y) const {
  const double s = theta.head(m_).dot(x) + theta(m_);
  return softplus(s) - y * s;
}

Derivatives LogisticModel::derivatives_impl(const Vector& theta, const Vector& x, double y,
                                            DerivativeSet which) const {
  const auto w = theta.head(m_);
  const double s = w.dot(x) + theta(m_);
  const double sig = sigmoid(s);
  const double resid = sig - y;
  const double curv = sig * (1.0 - sig);
  Vector xt(m_ + 1);
  xt << x, 1.0;

  Derivatives out;
  if (which.has(DerivativeKind::grad_theta)) out.grad_theta = resid * xt;
  if (which.has(DerivativeKind::grad_x)) out.grad_x = resid * w;
  if (which.has(DerivativeKind::hessian_theta)) out.hessian_theta = curv * xt * xt.transpose();
  if (which.has(DerivativeKind::mixed)) {
    Matrix mixed = curv * xt * w.transpose();
    mixed.topRows(m_).diagonal().array() += resid;
    out.mixed = std::move(mixed);
  }
  return out;
}

std::optional<int> LogisticModel::predict_label(const Vector& theta, const Vector& x) const {
  const double s = theta.head(m_).dot(x) + theta(m_);
  return s >= 0.0 ? 1 : 0;
}

}  // namespace robtrade
