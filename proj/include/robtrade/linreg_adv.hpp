#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robtrade/linalg.hpp"
#include "robtrade/norms.hpp"

namespace robtrade {

/// Linear regression instance Y = X theta* (+ noise), typically with d > n.
struct LinRegProblem {
  Matrix X;
  Vector Y;
  std::optional<Vector> theta_star;
  std::vector<Index> support;
  bool realizable = false;

  Index n() const { return X.rows(); }
  Index d() const { return X.cols(); }
  /// Throws DimensionError / PreconditionError when fields disagree.
  void validate() const;
};

/// Exact inner maximum of the l_p-attacked squared loss,
///   (1/n) sum_i (|y_i - x_i^T theta| + eps ||theta||_q)^2,  q in {1, 2}.
double adv_objective(const Vector& theta, const Matrix& X, const Vector& Y, double epsilon,
                     double q);

/// (1/n) ||Y - X theta||^2.
double mean_squared_residual(const Vector& theta, const Matrix& X, const Vector& Y);
/// sqrt of the above.
double rms_residual(const Vector& theta, const Matrix& X, const Vector& Y);

struct AdvSolverOptions {
  /// Continuation schedule for the smoothing width of |.| and the norm.
  double smoothing_start = 1e-1;
  double smoothing_end = 1e-11;
  double smoothing_factor = 0.1;
  int newton_iters_per_stage = 60;
  /// Stage stopping rule on the smoothed gradient sup-norm, relative to
  /// max(1, smoothed objective).
  double stage_tol = 1e-12;
};

struct AdvSolveResult {
  Vector theta;
  /// Exact (unsmoothed) objective at theta.
  double objective = 0.0;
  /// Best objectives per start: zero, minimum-norm interpolator, seeded random.
  std::vector<double> start_objectives;
  int newton_iterations = 0;
  double final_smoothing = 0.0;
  /// Sup-norm of the smoothed gradient at the final stage (diagnostic only).
  double smoothed_grad_norm = 0.0;
  /// Change of the exact objective during the final smoothing stage.
  double final_stage_change = 0.0;
  /// Spread between the best and worst start; small for a well-solved convex problem.
  double objective_gap_estimate = 0.0;
  bool converged = false;
};

/// Minimizes xi * adv_objective + (1 - xi) * mean_squared_residual (convex).
AdvSolveResult solve_adv_linreg(const Matrix& X, const Vector& Y, double epsilon, double q,
                                double xi = 1.0, const AdvSolverOptions& opts = {});

struct LassoOptions {
  double kkt_tol = 1e-10;
  long max_sweeps = 200000;
};

struct LassoResult {
  Vector theta;
  double kkt_residual = 0.0;
  long sweeps = 0;
  bool converged = false;
};

/// Cyclic coordinate descent with soft-thresholding on
///   (1/n) ||Y - X theta||^2 + lambda ||theta||_1.
LassoResult lasso_coordinate_descent(const Matrix& X, const Vector& Y, double lambda,
                                     const LassoOptions& opts = {},
                                     const std::optional<Vector>& warm_start = std::nullopt);

/// Exact LASSO solution path by homotopy: knots at decreasing lambda where the
/// active set changes, the solution being linear in lambda between knots.
struct LassoPath {
  std::vector<double> lambdas;  // strictly decreasing, starts at lambda_max
  std::vector<Vector> thetas;
  /// The path was followed down to lambda = 0 (its final knot).
  bool complete = false;

  /// Solution at lambda >= lambdas.back(); lambda above lambda_max gives 0.
  Vector at(double lambda) const;
};

/// Throws SingularSystemError if an active design block becomes singular.
LassoPath lasso_homotopy(const Matrix& X, const Vector& Y, int max_knots = 10000);

/// Largest violation of the LASSO optimality conditions.
double lasso_kkt_residual(const Matrix& X, const Vector& Y, const Vector& theta, double lambda);

/// Smallest lambda giving theta = 0: (2/n) ||X^T Y||_inf.
double lasso_lambda_max(const Matrix& X, const Vector& Y);

/// Minimizer of (1/n) ||Y - X theta||^2 + lambda ||theta||_2^2, i.e. the
/// solution of (X^T X / n + lambda I) theta = X^T Y / n (solved in the n x n
/// dual form when d > n). lambda = 0 requires full column rank.
Vector ridge_solve(const Matrix& X, const Vector& Y, double lambda);

/// X^+ Y.
Vector min_norm_interpolator(const Matrix& X, const Vector& Y);

struct EquivalenceReport {
  Vector theta_adv;
  double b_hat = 0.0;
  double lambda_matched = 0.0;
  double b_lasso = 0.0;
  Vector theta_lasso;
  double discrepancy = 0.0;
  double discrepancy_tolerance = 0.0;
  double b_bound = 0.0;
  bool bound_satisfied = false;
  /// ||theta_adv||_1 <= ||theta_lasso||_1 + 1e-6.
  bool l1_optimality = false;
  double adv_objective_at_optimum = 0.0;
  /// adv_objective(theta*) and the identity value eps^2 ||theta*||_1^2.
  double adv_objective_at_truth = 0.0;
  double truth_identity_value = 0.0;
  double lasso_kkt = 0.0;
  bool solver_converged = false;
};

/// Adversarial training under an l_inf attack against LASSO with the
/// penalty matched so both reach the same residual level. Throws
/// PreconditionError for non-realizable problems.
EquivalenceReport check_lasso_equivalence(const LinRegProblem& problem, double epsilon);

struct RestrictedEigenvalueEstimate {
  enum class Certificate { exact_on_support, sampled };
  /// Minimum of the support-only eigenvalue and the sampled cone values; an
  /// upper estimate of the true restricted eigenvalue.
  double tau_hat = 0.0;
  double support_eigenvalue = 0.0;
  double sampled_min = 0.0;
  Certificate certificate = Certificate::exact_on_support;
};

std::string to_string(RestrictedEigenvalueEstimate::Certificate c);

/// Estimates min (1/n)||X D||^2 over unit D in the cone
/// ||D_{S^c}||_1 <= zeta ||D_S||_1.
RestrictedEigenvalueEstimate restricted_eigenvalue_estimate(const Matrix& X,
                                                            const std::vector<Index>& support,
                                                            double zeta, int num_samples,
                                                            std::uint64_t seed);

struct RecoveryBoundReport {
  double error_l2 = 0.0;  // ||theta_adv - theta*||_2
  double tau_hat = 0.0;
  double bound_l1 = 0.0;  // eps ||theta*||_1 / sqrt(tau_hat), asserted form
  double bound_l2 = 0.0;  // eps ||theta*||_2 / sqrt(tau_hat), reported only
  bool skipped = false;   // tau_hat <= 0
  bool bound_l1_holds = false;
  bool bound_l2_holds = false;
  double cone_off_support_l1 = 0.0;
  double cone_on_support_l1 = 0.0;
  bool in_cone = false;
};

RecoveryBoundReport check_recovery_bound(const LinRegProblem& problem, const Vector& theta_adv,
                                        double epsilon, double tau_hat);

struct WeightedPathPoint {
  double xi = 0.0;
  Vector theta;
  double alpha = 0.0;  // mean squared residual
  double beta = 0.0;   // adversarial objective
  double b_hat = 0.0;
  double b_bound = 0.0;  // eps sqrt(xi) ||theta*||_q
  bool b_bound_holds = false;
  double error_l2 = 0.0;
  double bound_xi = 0.0;       // xi eps ||theta*||_1 / sqrt(tau)
  double bound_sqrt_xi = 0.0;  // sqrt(xi) eps ||theta*||_1 / sqrt(tau)
  bool bound_xi_holds = false;
  bool bound_sqrt_xi_holds = false;
  bool converged = false;
};

struct WeightedPathReport {
  double epsilon = 0.0;
  double q = 1.0;
  double tau_hat = 0.0;
  std::vector<WeightedPathPoint> points;
  /// b_hat non-decreasing in xi (observed, not required).
  bool b_hat_monotone = false;
};

/// xi-weighted sweep of the over-parameterized problem with per-point bound
/// checks. p must be 2 or inf (q = 2 or 1).
WeightedPathReport weighted_tradeoff_path(const LinRegProblem& problem, double epsilon, NormOrder p,
                              const std::vector<double>& xi_grid, double tau_hat);

struct DivergentInterpolator {
  Vector theta_base;  // minimum-norm interpolator of the training data
  Vector null_direction;
  double scale = 0.0;
  Vector theta_B;
  double train_loss_base = 0.0;
  double train_loss = 0.0;
  double eval_loss = 0.0;  // ||Y_eval - X_eval theta_B||^2
};

/// Moves the minimum-norm interpolator along a null direction of X_train
/// until the evaluation loss exceeds B. Throws ConstructionImpossibleError
/// when the null space of X_train is trivial or invisible to X_eval.
DivergentInterpolator construct_divergent_interpolators(const Matrix& X_train,
                                                        const Vector& Y_train,
                                                        const Matrix& X_eval,
                                                        const Vector& Y_eval, double B);

}  // namespace robtrade
