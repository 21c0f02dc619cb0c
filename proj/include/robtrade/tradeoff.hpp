#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robtrade/attack.hpp"
#include "robtrade/dataset.hpp"
#include "robtrade/models.hpp"
#include "robtrade/optimizer.hpp"
#include "robtrade/parameter_vector.hpp"

namespace robtrade {

/// xi * beta-hat + (1 - xi) * alpha-hat; xi in [0, 1].
double joint_objective(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                       const AttackSpec& spec, double xi, Execution exec = Execution::parallel);

/// Gradient of beta-hat by Danskin's rule: the mean of grad_theta l at the
/// inner maximizers x_i + delta_i*, with no differentiation through delta.
Vector danskin_gradient(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                        const AttackSpec& spec, Execution exec = Execution::parallel);

struct CurvePoint {
  double xi = 0.0;
  ParameterVector theta;
  /// Clean and adversarial loss on the evaluation set.
  double alpha = 0.0;
  double beta = 0.0;
  /// The same quantities on the training set, and the scalarized objective.
  double train_alpha = 0.0;
  double train_beta = 0.0;
  double train_objective = 0.0;
  std::optional<double> accuracy_clean;
  std::optional<double> accuracy_adv;
  bool converged = false;
  double grad_norm_final = 0.0;
  int iterations = 0;
};

struct TradeoffCurve {
  std::vector<CurvePoint> points;  // xi ascending
  std::vector<std::size_t> frontier;  // indices into points, alpha ascending
  AttackSpec attack;
  std::string model;
  std::vector<std::pair<std::string, std::string>> model_params;
  std::string dataset;
  std::uint64_t seed = 0;
};

/// xi grid used for the trade-off sweep: endpoints 0.001 and 0.999 stand in
/// for 0 and 1.
std::vector<double> default_xi_grid();

/// Minimizes the joint objective from `init` and reports the point on `data`.
CurvePoint optimize_point(const LossModel& model, const LabeledDataset& data, double xi,
                          const AttackSpec& spec, const OptimizerConfig& cfg, const Vector& init);
/// Starts from model.initial_parameters(cfg.seed).
CurvePoint optimize_point(const LossModel& model, const LabeledDataset& data, double xi,
                          const AttackSpec& spec, const OptimizerConfig& cfg);

/// Ascending sweep over xi_grid (each value strictly inside (0, 1)).
/// Each point keeps the better of a warm start from the previous point and a
/// cold start from the clean minimizer; afterwards every point is re-optimized
/// from any other point's parameters that score better on its own objective.
/// Points that fail to optimize are kept and marked unconverged.
TradeoffCurve sweep_curve(const LossModel& model, const LabeledDataset& train,
                          const LabeledDataset& eval, const std::vector<double>& xi_grid,
                          const AttackSpec& spec, const OptimizerConfig& cfg);

/// Indices of points not weakly dominated by another point (alpha' <= alpha
/// and beta' <= beta with one strict), ordered by alpha ascending (stable).
std::vector<std::size_t> pareto_filter(const std::vector<std::pair<double, double>>& points);

}  // namespace robtrade
