#pragma once

#include <cstdint>
#include <string>

#include "robtrade/attack.hpp"
#include "robtrade/dataset.hpp"
#include "robtrade/execution.hpp"
#include "robtrade/linalg.hpp"
#include "robtrade/models.hpp"

namespace robtrade {

/// Deterministic full-batch minimizer of xi * beta-hat + (1 - xi) * alpha-hat.
/// When the model lists inner stationary points, samples whose adversarial
/// loss has several near-maximal pieces enter a piecewise local model, so the
/// descent direction and the stationarity measure see the kink.
struct OptimizerConfig {
  enum class Method {
    /// Steepest descent with Armijo backtracking and an adaptive step.
    gradient_descent,
    /// Metric from the loss Hessian at the attacked inputs (damped until
    /// positive definite), same line search; falls back to the steepest
    /// descent step when no descent direction results.
    newton,
  };

  Method method = Method::gradient_descent;
  int max_iters = 5000;
  /// Stop when the stationarity measure reaches this value.
  double grad_tol = 1e-8;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  std::uint64_t seed = 0;
  Execution exec = Execution::parallel;
};

std::string to_string(OptimizerConfig::Method method);
OptimizerConfig::Method parse_optimizer_method(const std::string& text);

struct OptimizationResult {
  Vector theta;  // best iterate by objective
  double objective = 0.0;
  /// Sup-norm of the minimal aggregated subgradient of the local model at
  /// `theta`; the plain gradient sup-norm away from kinks.
  double grad_norm = 0.0;
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  /// "gradient tolerance", "line search stalled", or "iteration limit".
  std::string stop_reason;
};

/// Throws OptimizationError if the objective becomes non-finite.
OptimizationResult minimize_joint(const LossModel& model, const LabeledDataset& data,
                                  const AttackSpec& spec, double xi, const Vector& init,
                                  const OptimizerConfig& cfg);

}  // namespace robtrade
