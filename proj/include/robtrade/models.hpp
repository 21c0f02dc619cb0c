#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robtrade/linalg.hpp"
#include "robtrade/norms.hpp"
#include "robtrade/parameter_vector.hpp"

namespace robtrade {

enum class DerivativeKind : unsigned {
  grad_theta = 1u << 0,
  grad_x = 1u << 1,
  hessian_theta = 1u << 2,
  mixed = 1u << 3,
};

class DerivativeSet {
 public:
  constexpr DerivativeSet() = default;
  constexpr DerivativeSet(DerivativeKind kind) : bits_(static_cast<unsigned>(kind)) {}

  static constexpr DerivativeSet all() { return DerivativeSet(0xFu); }

  constexpr bool has(DerivativeKind kind) const {
    return (bits_ & static_cast<unsigned>(kind)) != 0;
  }
  constexpr DerivativeSet operator|(DerivativeSet other) const {
    return DerivativeSet(bits_ | other.bits_);
  }

 private:
  constexpr explicit DerivativeSet(unsigned bits) : bits_(bits) {}
  unsigned bits_ = 0;
};

constexpr DerivativeSet operator|(DerivativeKind a, DerivativeKind b) {
  return DerivativeSet(a) | DerivativeSet(b);
}

/// Requested derivative blocks of l(theta, x, y). Shapes:
/// grad_theta d, grad_x m, hessian_theta d x d (symmetric),
/// mixed d x m with mixed(i, j) = d^2 l / d theta_i d x_j.
struct Derivatives {
  std::optional<Vector> grad_theta;
  std::optional<Vector> grad_x;
  std::optional<Matrix> hessian_theta;
  std::optional<Matrix> mixed;
};

/// Per-sample loss l(theta, x, y) with analytic derivatives, plus an optional
/// additive regularizer that applies once per batch (not per sample).
///
/// Implementations are immutable after construction; every member is safe to
/// call concurrently.
class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual std::string name() const = 0;
  virtual Index param_dim() const = 0;
  virtual Index input_dim() const = 0;
  virtual ParameterLayout layout() const;

  /// Validates shapes and finiteness, then evaluates.
  double loss(const Vector& theta, const Vector& x, double y) const;
  Derivatives derivatives(const Vector& theta, const Vector& x, double y,
                          DerivativeSet which) const;

  virtual double regularizer(const Vector& /*theta*/) const { return 0.0; }
  virtual Vector regularizer_gradient(const Vector& theta) const;
  virtual Matrix regularizer_hessian(const Vector& theta) const;

  /// Closed-form maximizer of l(theta, x + delta, y) over ||delta||_p <= epsilon
  /// when the model admits one; std::nullopt otherwise.
  virtual std::optional<Vector> exact_attack(const Vector& /*theta*/, const Vector& /*x*/,
                                             double /*y*/, double /*epsilon*/,
                                             NormOrder /*p*/) const {
    return std::nullopt;
  }

  /// Perturbations that are local maximizers (or other stationary points) of
  /// the inner problem, each smooth in theta with a Danskin gradient. Used by
  /// the outer optimizer to model kinks of the adversarial loss. Empty when
  /// the model offers none; the exact_attack result is always among them.
  virtual std::vector<Vector> attack_candidates(const Vector& /*theta*/, const Vector& /*x*/,
                                                double /*y*/, double /*epsilon*/,
                                                NormOrder /*p*/) const {
    return {};
  }

  /// Hard label for classifiers; std::nullopt for regression models.
  virtual std::optional<int> predict_label(const Vector& /*theta*/, const Vector& /*x*/) const {
    return std::nullopt;
  }

  /// Deterministic starting point for optimizers.
  virtual Vector initial_parameters(std::uint64_t seed) const;

  /// JSON-friendly description of hyperparameters, as "key=value" pairs.
  virtual std::vector<std::pair<std::string, std::string>> describe() const { return {}; }

 protected:
  virtual double loss_impl(const Vector& theta, const Vector& x, double y) const = 0;
  virtual Derivatives derivatives_impl(const Vector& theta, const Vector& x, double y,
                                       DerivativeSet which) const = 0;

 private:
  void check_arguments(const Vector& theta, const Vector& x, double y) const;
};

/// l = (y - x^T theta)^2, d = m.
class LinearModel final : public LossModel {
 public:
  explicit LinearModel(Index input_dim);

  std::string name() const override { return "linear"; }
  Index param_dim() const override { return m_; }
  Index input_dim() const override { return m_; }

  std::optional<Vector> exact_attack(const Vector& theta, const Vector& x, double y,
                                     double epsilon, NormOrder p) const override;

 protected:
  double loss_impl(const Vector& theta, const Vector& x, double y) const override;
  Derivatives derivatives_impl(const Vector& theta, const Vector& x, double y,
                               DerivativeSet which) const override;

 private:
  Index m_;
};

/// l = 0.5 ||theta - x||_2^2 (the target y is ignored). A location estimator;
/// its minimizer over a batch is the sample mean.
class LocationModel final : public LossModel {
 public:
  explicit LocationModel(Index input_dim);

  std::string name() const override { return "location"; }
  Index param_dim() const override { return m_; }
  Index input_dim() const override { return m_; }

  std::optional<Vector> exact_attack(const Vector& theta, const Vector& x, double y,
                                     double epsilon, NormOrder p) const override;

 protected:
  double loss_impl(const Vector& theta, const Vector& x, double y) const override;
  Derivatives derivatives_impl(const Vector& theta, const Vector& x, double y,
                               DerivativeSet which) const override;

 private:
  Index m_;
};

/// Shallow network with quadratic activation,
///   f(x, W) = sum_j a_j (w_j^T x)^2,  theta = (w_1; ...; w_k),
/// per-sample loss (y - f)^2 and batch regularizer (mu / 2) ||W||_F^2.
class ShallowQuadNet final : public LossModel {
 public:
  /// Throws ArgumentError unless mu > 0, a is non-empty and finite.
  ShallowQuadNet(Index input_dim, std::vector<double> a, double mu);

  std::string name() const override { return "quadnet"; }
  Index param_dim() const override { return k() * m_; }
  Index input_dim() const override { return m_; }
  ParameterLayout layout() const override;

  Index k() const noexcept { return static_cast<Index>(a_.size()); }
  const std::vector<double>& a() const noexcept { return a_; }
  double mu() const noexcept { return mu_; }

  /// Network output f(x, W).
  double predict(const Vector& theta, const Vector& x) const;

  double regularizer(const Vector& theta) const override;
  Vector regularizer_gradient(const Vector& theta) const override;
  Matrix regularizer_hessian(const Vector& theta) const override;

  /// f(x + delta) is quadratic in delta, so the worst case is the larger of
  /// (y - min f)^2 and (max f - y)^2 over the ball: a trust-region problem for
  /// p = 2, a face enumeration of the box for p = inf (m <= 8).
  std::optional<Vector> exact_attack(const Vector& theta, const Vector& x, double y,
                                     double epsilon, NormOrder p) const override;
  /// p = inf: every stationary point of f on a face of the box; p = 2: the
  /// minimizer and the maximizer of f over the ball.
  std::vector<Vector> attack_candidates(const Vector& theta, const Vector& x, double y,
                                        double epsilon, NormOrder p) const override;

  Vector initial_parameters(std::uint64_t seed) const override;
  std::vector<std::pair<std::string, std::string>> describe() const override;

 protected:
  double loss_impl(const Vector& theta, const Vector& x, double y) const override;
  Derivatives derivatives_impl(const Vector& theta, const Vector& x, double y,
                               DerivativeSet which) const override;

 private:
  Index m_;
  std::vector<double> a_;
  double mu_;
};

/// Binary logistic regression with bias, y in {0, 1}; theta = (w; b),
/// l = log(1 + exp(s)) - y s with s = w^T x + b.
class LogisticModel final : public LossModel {
 public:
  explicit LogisticModel(Index input_dim);

  std::string name() const override { return "logistic"; }
  Index param_dim() const override { return m_ + 1; }
  Index input_dim() const override { return m_; }
  ParameterLayout layout() const override;

  std::optional<int> predict_label(const Vector& theta, const Vector& x) const override;

 protected:
  double loss_impl(const Vector& theta, const Vector& x, double y) const override;
  Derivatives derivatives_impl(const Vector& theta, const Vector& x, double y,
                               DerivativeSet which) const override;

 private:
  Index m_;
};

ParameterVector make_parameters(const LossModel& model, Vector values);

}  // namespace robtrade
