#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robtrade/dataset.hpp"
#include "robtrade/execution.hpp"
#include "robtrade/linalg.hpp"
#include "robtrade/models.hpp"
#include "robtrade/norms.hpp"

namespace robtrade {

/// Threat model: l_p ball of radius epsilon around each input, plus settings
/// for the projected-gradient inner solver.
struct AttackSpec {
  /// automatic: the model's exact maximizer when it has one, projected ascent
  /// otherwise. pgd: always projected ascent.
  enum class Inner { automatic, pgd };

  NormOrder p = NormOrder::infinity();
  double epsilon = 0.0;
  int pgd_steps = 20;
  /// Defaults to 2.5 * epsilon / pgd_steps when unset.
  std::optional<double> pgd_step_size;
  std::uint64_t seed = 0;
  Inner inner = Inner::automatic;

  double step_size() const;
  /// Throws ArgumentError on negative epsilon, non-positive steps or step size.
  void validate() const;
};

/// Absolute slack accepted on ||delta||_p <= epsilon.
inline constexpr double kBallSlack = 1e-9;

struct Perturbation {
  Vector delta;
  /// Loss at x + delta.
  double loss = 0.0;
  /// Input gradient vanished at the start of projected ascent.
  bool degenerate = false;
};

/// Unit-l_p vector phi maximizing phi^T g (Hoelder equality case):
///   phi_k = sgn(g_k) |g_k|^(q-1) / ||g||_q^(q-1).
/// Zero coordinates of g map to zero. Throws DegenerateGradientError for g = 0.
Vector holder_direction(const Vector& grad_x, NormOrder p);

/// Euclidean projection onto the epsilon ball for p = 2 (radial scaling) or
/// p = inf (coordinate clamp). Throws ArgumentError for other p.
Vector project_lp_ball(const Vector& v, double epsilon, NormOrder p);

/// Exact maximizer for the squared-error linear model:
///   delta = sgn(x^T theta - y) * epsilon * holder_direction(theta, p),
/// so that the loss becomes (|y - x^T theta| + epsilon ||theta||_q)^2. A zero
/// residual is treated as positive; zero theta coordinates get zero delta.
Perturbation linear_model_attack(const Vector& theta, const Vector& x, double y, double epsilon,
                                 NormOrder p = NormOrder::infinity());

/// Projected ascent from delta = 0 along the Hoelder direction of the input
/// gradient. Returns the best iterate by loss, and is never worse than the
/// one-step attack epsilon * holder_direction(grad_x l(x)).
Perturbation pgd_attack(const LossModel& model, const Vector& theta, const Vector& x, double y,
                        const AttackSpec& spec);

/// Enumerates the 2^m corners of the l_inf ball. Throws RefusalError for m > 12.
Perturbation corner_oracle_attack(const LossModel& model, const Vector& theta, const Vector& x,
                                  double y, double epsilon);

inline constexpr Index kCornerOracleMaxDim = 12;

std::string to_string(AttackSpec::Inner inner);
/// "auto" or "pgd".
AttackSpec::Inner parse_inner_solver(const std::string& text);

/// Closed form when the model has one (and spec.inner allows it), projected
/// ascent otherwise.
Perturbation best_attack(const LossModel& model, const Vector& theta, const Vector& x, double y,
                         const AttackSpec& spec);

/// Per-sample inner maximization over a dataset.
struct InnerSolution {
  Matrix deltas;  // n x m
  Vector losses;  // per-sample adversarial loss
  std::vector<Index> degenerate_samples;
  /// beta-hat: mean of losses plus the batch regularizer.
  double batch_value = 0.0;
};

InnerSolution solve_inner(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                          const AttackSpec& spec, Execution exec = Execution::parallel);

/// beta-hat(theta); never below batch_loss(theta).
double adversarial_batch_loss(const LossModel& model, const Vector& theta,
                              const LabeledDataset& data, const AttackSpec& spec,
                              Execution exec = Execution::parallel);

}  // namespace robtrade
