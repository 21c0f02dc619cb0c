#include "robtrade/ifa.hpp"

#include <cmath>
#include <sstream>

#include "robtrade/batch.hpp"
#include "robtrade/errors.hpp"
#include "robtrade/kernels.hpp"

namespace robtrade {

namespace {

struct Spectrum {
  double min = 0.0;
  double max = 0.0;
};

Spectrum spectrum(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SingularHessianError("eigendecomposition failed");
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

bool factor(const Matrix& H, double mu, Eigen::LLT<Matrix>& llt) {
  Matrix A = H;
  A.diagonal().array() += mu;
  llt.compute(A);
  if (llt.info() != Eigen::Success) return false;
  const Vector diag = llt.matrixLLT().diagonal();
  return diag.allFinite() && diag.minCoeff() > 0.0;
}

}  // namespace

PhiAssembly assemble_phi(const LossModel& model, const Vector& theta_hat,
                         const LabeledDataset& data, NormOrder p, const IfaOptions& opts) {
  PhiAssembly out;
  const Vector g = batch_gradient(model, theta_hat, data, opts.exec);
  out.gradient_sup_norm = g.cwiseAbs().maxCoeff();
  if (!(out.gradient_sup_norm <= opts.stationarity_tol)) {
    std::ostringstream msg;
    msg << "theta-hat is not stationary: gradient sup-norm " << out.gradient_sup_norm
        << " exceeds tolerance " << opts.stationarity_tol;
    throw StationarityError(msg.str(), out.gradient_sup_norm);
  }

  const auto terms =
      opts.exec == Execution::serial
          ? kernels::serial::phi_terms(model, theta_hat, data, p, opts.degenerate_tol)
          : kernels::omp::phi_terms(model, theta_hat, data, p, opts.degenerate_tol);
  out.phi = Vector::Zero(model.param_dim());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i]) {
      out.phi += *terms[i];
    } else {
      out.degenerate_samples.push_back(static_cast<Index>(i));
    }
  }
  out.phi /= static_cast<double>(data.size());
  return out;
}

DampedCholesky damped_cholesky(const Matrix& H, double initial_damping) {
  if (H.rows() != H.cols()) throw DimensionError("Hessian must be square");
  if (!(initial_damping >= 0.0)) throw ArgumentError("damping must be >= 0");
  if (!H.allFinite()) throw SingularHessianError("Hessian has non-finite entries");

  DampedCholesky out;
  if (factor(H, initial_damping, out.llt)) {
    out.damping = initial_damping;
    return out;
  }
  const double d = static_cast<double>(std::max<Index>(1, H.rows()));
  double mu = std::max(1e-8, 1e-6 * H.diagonal().cwiseAbs().sum() / d);
  mu = std::max(mu, 10.0 * initial_damping);
  for (int rung = 0; rung <= 6; ++rung, mu *= 10.0) {
    if (factor(H, mu, out.llt)) {
      out.damping = mu;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "Hessian not positive definite even with damping " << mu / 10.0;
  throw SingularHessianError(msg.str());
}

IfaResult compute_ifa(const LossModel& model, const Vector& theta_hat, const LabeledDataset& data,
                      NormOrder p, double damping, const IfaOptions& opts) {
  auto phi = assemble_phi(model, theta_hat, data, p, opts);
  const Matrix H = batch_hessian(model, theta_hat, data, opts.exec);
  const auto spec = spectrum(H);
  auto dc = damped_cholesky(H, damping);

  IfaResult out;
  out.phi = std::move(phi.phi);
  out.degenerate_samples = std::move(phi.degenerate_samples);
  out.gradient_sup_norm = phi.gradient_sup_norm;
  out.lambda_min = spec.min;
  out.lambda_max = spec.max;
  out.damping_used = dc.damping;

  Matrix A = H;
  A.diagonal().array() += dc.damping;
  out.ifa = -dc.llt.solve(out.phi);
  // One round of refinement tightens the residual on ill-conditioned systems.
  Vector r = A * out.ifa + out.phi;
  out.ifa -= dc.llt.solve(r);
  out.solve_residual = (A * out.ifa + out.phi).norm();
  return out;
}

double delta_hat_exact(const LossModel& model, const Vector& theta_hat, const Vector& theta_eps,
                       const LabeledDataset& eval, Execution exec) {
  return batch_loss(model, theta_eps, eval, exec) - batch_loss(model, theta_hat, eval, exec);
}

TradeoffQuadApprox delta_hat_quadratic(const Vector& phi, const Matrix& H_train,
                                       const Matrix& H_eval, double epsilon) {
  const Index d = phi.size();
  if (H_train.rows() != d || H_train.cols() != d || H_eval.rows() != d || H_eval.cols() != d) {
    throw DimensionError("Hessians must be d x d with d = length of phi");
  }
  TradeoffQuadApprox out;
  const auto st = spectrum(H_train);
  const auto se = spectrum(H_eval);
  out.lambda_train_min = st.min;
  out.lambda_train_max = st.max;
  out.lambda_eval_min = se.min;
  out.lambda_eval_max = se.max;

  Eigen::LLT<Matrix> llt(H_train);
  if (st.min <= 0.0 || llt.info() != Eigen::Success) {
    throw SingularHessianError("training Hessian is not positive definite");
  }
  const Vector v = llt.solve(phi);
  out.quad_form_value = v.dot(H_eval * v);
  out.delta_hat = 0.5 * out.quad_form_value * epsilon * epsilon;

  if (se.min > 0.0) {
    const double phi2 = phi.squaredNorm();
    out.bounds_valid = true;
    out.lower_bound = se.min / (st.max * st.max) * phi2;
    out.upper_bound = se.max / (st.min * st.min) * phi2;
  }
  return out;
}

TradeoffQuadApprox delta_hat_quadratic(const IfaResult& ifa, const Matrix& H_train,
                                       const Matrix& H_eval, double epsilon) {
  return delta_hat_quadratic(ifa.phi, H_train, H_eval, epsilon);
}

// ------------------------------------------------------- QuadraticSurrogate

QuadraticSurrogate::QuadraticSurrogate(std::shared_ptr<const LossModel> base, Vector anchor,
                                       const Matrix& hessian, Vector regularizer_gradient,
                                       double regularizer_value, double damping,
                                       Vector batch_gradient)
    : base_(std::move(base)),
      anchor_(std::move(anchor)),
      curvature_(hessian),
      reg_gradient_(std::move(regularizer_gradient)),
      reg_value_(regularizer_value),
      damping_(damping),
      batch_gradient_(std::move(batch_gradient)) {
  if (!base_) throw ArgumentError("surrogate needs a base model");
  const Index d = base_->param_dim();
  if (anchor_.size() != d || curvature_.rows() != d || curvature_.cols() != d ||
      reg_gradient_.size() != d || batch_gradient_.size() != d) {
    throw DimensionError("surrogate operands do not match the base model dimension");
  }
  curvature_.diagonal().array() += damping_;
}

Vector QuadraticSurrogate::minimizer() const {
  Eigen::LLT<Matrix> llt(curvature_);
  if (llt.info() != Eigen::Success) {
    throw SingularHessianError("surrogate curvature is not positive definite");
  }
  return anchor_ - llt.solve(batch_gradient_);
}

double QuadraticSurrogate::loss_impl(const Vector& theta, const Vector& x, double y) const {
  const Vector D = theta - anchor_;
  const auto der = base_->derivatives(anchor_, x, y, DerivativeKind::grad_theta);
  return base_->loss(anchor_, x, y) + reg_value_ + (*der.grad_theta + reg_gradient_).dot(D) +
         0.5 * D.dot(curvature_ * D);
}

Derivatives QuadraticSurrogate::derivatives_impl(const Vector& theta, const Vector& x, double y,
                                                 DerivativeSet which) const {
  const Vector D = theta - anchor_;
  const bool need_x = which.has(DerivativeKind::grad_x);
  const bool need_mixed = need_x || which.has(DerivativeKind::mixed);
  DerivativeSet base_which = DerivativeKind::grad_theta;
  if (need_x) base_which = base_which | DerivativeKind::grad_x;
  if (need_mixed) base_which = base_which | DerivativeKind::mixed;
  const auto der = base_->derivatives(anchor_, x, y, base_which);

  Derivatives out;
  if (which.has(DerivativeKind::grad_theta)) {
    out.grad_theta = Vector(*der.grad_theta + reg_gradient_ + curvature_ * D);
  }
  if (need_x) out.grad_x = Vector(*der.grad_x + der.mixed->transpose() * D);
  if (which.has(DerivativeKind::hessian_theta)) out.hessian_theta = curvature_;
  if (which.has(DerivativeKind::mixed)) out.mixed = *der.mixed;
  return out;
}

std::shared_ptr<QuadraticSurrogate> surrogate_quadratic(std::shared_ptr<const LossModel> model,
                                                        const Vector& theta_tilde,
                                                        const LabeledDataset& data, double mu) {
  if (!model) throw ArgumentError("surrogate needs a base model");
  const Matrix H = batch_hessian(*model, theta_tilde, data);
  const Vector g = batch_gradient(*model, theta_tilde, data);
  const auto dc = damped_cholesky(H, mu);
  return std::make_shared<QuadraticSurrogate>(model, theta_tilde, H,
                                              model->regularizer_gradient(theta_tilde),
                                              model->regularizer(theta_tilde), dc.damping, g);
}

}  // namespace robtrade
