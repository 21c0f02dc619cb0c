#pragma once

#include <memory>
#include <vector>

#include "robtrade/dataset.hpp"
#include "robtrade/execution.hpp"
#include "robtrade/linalg.hpp"
#include "robtrade/models.hpp"
#include "robtrade/norms.hpp"

namespace robtrade {

inline constexpr double kDefaultStationarityTol = 1e-6;

struct PhiAssembly {
  /// Phi = (1/n) sum_i mixed_i * phi_i.
  Vector phi;
  /// Samples whose input gradient vanished; they contribute zero.
  std::vector<Index> degenerate_samples;
  /// Sup-norm of the batch gradient at theta-hat.
  double gradient_sup_norm = 0.0;
};

struct IfaOptions {
  double stationarity_tol = kDefaultStationarityTol;
  /// Input gradients with sup-norm at or below this count as zero.
  double degenerate_tol = 0.0;
  Execution exec = Execution::parallel;
};

/// Throws StationarityError when ||grad alpha-hat(theta_hat)||_inf exceeds the
/// tolerance; the measured norm is attached.
PhiAssembly assemble_phi(const LossModel& model, const Vector& theta_hat,
                         const LabeledDataset& data, NormOrder p, const IfaOptions& opts = {});

/// Cholesky factor of H + damping * I, escalating damping when H is not
/// positive definite: start at `initial`; on failure set
/// max(1e-8, 1e-6 trace|H| / d) and multiply by 10, at most 6 escalations.
struct DampedCholesky {
  Eigen::LLT<Matrix> llt;
  double damping = 0.0;
};
/// Throws SingularHessianError if every rung of the ladder fails.
DampedCholesky damped_cholesky(const Matrix& H, double initial_damping);

/// Influence of an infinitesimal attack on the minimizer: d theta_eps / d eps.
struct IfaResult {
  Vector ifa;
  Vector phi;
  double lambda_min = 0.0;  // extreme eigenvalues of the undamped batch Hessian
  double lambda_max = 0.0;
  double damping_used = 0.0;
  std::vector<Index> degenerate_samples;
  double gradient_sup_norm = 0.0;
  /// ||(H + damping I) ifa + phi||_2.
  double solve_residual = 0.0;
};

/// ifa = -(H + mu I)^{-1} Phi with H the batch Hessian at theta_hat.
IfaResult compute_ifa(const LossModel& model, const Vector& theta_hat, const LabeledDataset& data,
                      NormOrder p, double damping = 0.0, const IfaOptions& opts = {});

/// Clean-loss gap batch_loss(theta_eps, eval) - batch_loss(theta_hat, eval).
double delta_hat_exact(const LossModel& model, const Vector& theta_hat, const Vector& theta_eps,
                       const LabeledDataset& eval, Execution exec = Execution::parallel);

/// Quadratic approximation of the clean-loss gap and its spectral bounds:
///   quad = Phi^T Ht^{-1} He Ht^{-1} Phi,  delta_hat = quad * eps^2 / 2,
///   lambda_min(He) / lambda_max(Ht)^2 |Phi|^2 <= quad
///       <= lambda_max(He) / lambda_min(Ht)^2 |Phi|^2.
struct TradeoffQuadApprox {
  double delta_hat = 0.0;
  double quad_form_value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  /// False when He is not positive definite; the bounds are then left at 0.
  bool bounds_valid = false;
  double lambda_train_min = 0.0, lambda_train_max = 0.0;
  double lambda_eval_min = 0.0, lambda_eval_max = 0.0;
};

/// Throws SingularHessianError when H_train is not positive definite.
TradeoffQuadApprox delta_hat_quadratic(const Vector& phi, const Matrix& H_train,
                                       const Matrix& H_eval, double epsilon);
TradeoffQuadApprox delta_hat_quadratic(const IfaResult& ifa, const Matrix& H_train,
                                       const Matrix& H_eval, double epsilon);

/// Convex quadratic stand-in for alpha-hat around an arbitrary point theta~:
///   l~(theta, x, y) = l(theta~, x, y) + R(theta~)
///                   + (grad_theta l(theta~, x, y) + grad R(theta~))^T D
///                   + 0.5 D^T (H + mu I) D,          D = theta - theta~,
/// with H the batch Hessian of alpha-hat at theta~ (frozen, independent of x).
/// The batch mean of l~ is exactly the damped second-order expansion of
/// alpha-hat, and the input derivatives are exact, so the IFA machinery
/// applies at the surrogate's minimizer.
class QuadraticSurrogate final : public LossModel {
 public:
  /// `hessian` is the undamped batch Hessian at `anchor`; the surrogate uses
  /// hessian + damping * I. `batch_gradient` is grad alpha-hat(anchor).
  QuadraticSurrogate(std::shared_ptr<const LossModel> base, Vector anchor, const Matrix& hessian,
                     Vector regularizer_gradient, double regularizer_value, double damping,
                     Vector batch_gradient);

  std::string name() const override { return "surrogate(" + base_->name() + ")"; }
  Index param_dim() const override { return base_->param_dim(); }
  Index input_dim() const override { return base_->input_dim(); }
  ParameterLayout layout() const override { return base_->layout(); }

  const Vector& anchor() const noexcept { return anchor_; }
  double damping() const noexcept { return damping_; }
  /// H + mu I.
  const Matrix& curvature() const noexcept { return curvature_; }
  /// anchor - (H + mu I)^{-1} grad alpha-hat(anchor).
  Vector minimizer() const;

  Vector initial_parameters(std::uint64_t /*seed*/) const override { return anchor_; }

 protected:
  double loss_impl(const Vector& theta, const Vector& x, double y) const override;
  Derivatives derivatives_impl(const Vector& theta, const Vector& x, double y,
                               DerivativeSet which) const override;

 private:
  std::shared_ptr<const LossModel> base_;
  Vector anchor_;
  Matrix curvature_;
  Vector reg_gradient_;
  double reg_value_;
  double damping_;
  Vector batch_gradient_;
};

/// Builds the surrogate at theta_tilde, escalating mu with damped_cholesky
/// until H + mu I is positive definite.
std::shared_ptr<QuadraticSurrogate> surrogate_quadratic(std::shared_ptr<const LossModel> model,
                                                        const Vector& theta_tilde,
                                                        const LabeledDataset& data, double mu);

}  // namespace robtrade
