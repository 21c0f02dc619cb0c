#include "robtrade/tradeoff.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "robtrade/batch.hpp"
#include "robtrade/errors.hpp"

namespace robtrade {

namespace {

void check_xi(double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
}

double accuracy(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                const Matrix* deltas) {
  Index correct = 0;
  for (Index i = 0; i < data.size(); ++i) {
    Vector x = data.x(i);
    if (deltas != nullptr) x += deltas->row(i).transpose();
    const auto label = model.predict_label(theta, x);
    if (label && static_cast<double>(*label) == data.y(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

CurvePoint describe_point(const LossModel& model, const LabeledDataset& train,
                          const LabeledDataset& eval, double xi, const AttackSpec& spec,
                          const Vector& theta, Execution exec) {
  CurvePoint pt;
  pt.xi = xi;
  pt.theta = make_parameters(model, theta);
  pt.train_alpha = batch_loss(model, theta, train, exec);
  pt.train_beta = adversarial_batch_loss(model, theta, train, spec, exec);
  pt.train_objective = xi * pt.train_beta + (1.0 - xi) * pt.train_alpha;
  if (&train == &eval) {
    pt.alpha = pt.train_alpha;
    pt.beta = pt.train_beta;
  } else {
    pt.alpha = batch_loss(model, theta, eval, exec);
    pt.beta = adversarial_batch_loss(model, theta, eval, spec, exec);
  }
  if (model.predict_label(theta, eval.x(0))) {
    const auto inner = solve_inner(model, theta, eval, spec, exec);
    pt.accuracy_clean = accuracy(model, theta, eval, nullptr);
    pt.accuracy_adv = accuracy(model, theta, eval, &inner.deltas);
  }
  return pt;
}

CurvePoint point_from(const LossModel& model, const LabeledDataset& train,
                      const LabeledDataset& eval, double xi, const AttackSpec& spec,
                      const OptimizerConfig& cfg, const OptimizationResult& res) {
  CurvePoint pt = describe_point(model, train, eval, xi, spec, res.theta, cfg.exec);
  pt.converged = res.converged;
  pt.grad_norm_final = res.grad_norm;
  pt.iterations = res.iterations;
  return pt;
}

// Optimizes from `init`; on failure returns the initializer marked unconverged.
OptimizationResult attempt(const LossModel& model, const LabeledDataset& data,
                           const AttackSpec& spec, double xi, const Vector& init,
                           const OptimizerConfig& cfg) {
  try {
    return minimize_joint(model, data, spec, xi, init, cfg);
  } catch (const OptimizationError&) {
    OptimizationResult res;
    res.theta = init;
    res.objective = joint_objective(model, init, data, spec, xi, cfg.exec);
    res.initial_objective = res.objective;
    res.grad_norm = std::numeric_limits<double>::infinity();
    res.stop_reason = "optimization error";
    return res;
  }
}

}  // namespace

double joint_objective(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                       const AttackSpec& spec, double xi, Execution exec) {
  check_xi(xi);
  double value = 0.0;
  if (xi > 0.0) value += xi * adversarial_batch_loss(model, theta, data, spec, exec);
  if (xi < 1.0) value += (1.0 - xi) * batch_loss(model, theta, data, exec);
  return value;
}

Vector danskin_gradient(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                        const AttackSpec& spec, Execution exec) {
  const auto inner = solve_inner(model, theta, data, spec, exec);
  return perturbed_batch_gradient(model, theta, data, inner.deltas, exec);
}

std::vector<double> default_xi_grid() { return {0.001, 0.25, 0.50, 0.75, 0.999}; }

CurvePoint optimize_point(const LossModel& model, const LabeledDataset& data, double xi,
                          const AttackSpec& spec, const OptimizerConfig& cfg, const Vector& init) {
  check_xi(xi);
  const auto res = minimize_joint(model, data, spec, xi, init, cfg);
  return point_from(model, data, data, xi, spec, cfg, res);
}

CurvePoint optimize_point(const LossModel& model, const LabeledDataset& data, double xi,
                          const AttackSpec& spec, const OptimizerConfig& cfg) {
  return optimize_point(model, data, xi, spec, cfg, model.initial_parameters(cfg.seed));
}

TradeoffCurve sweep_curve(const LossModel& model, const LabeledDataset& train,
                          const LabeledDataset& eval, const std::vector<double>& xi_grid,
                          const AttackSpec& spec, const OptimizerConfig& cfg) {
  if (xi_grid.empty()) throw ArgumentError("xi grid is empty");
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    if (!(xi_grid[i] > 0.0 && xi_grid[i] < 1.0)) {
      throw ArgumentError("xi grid values must lie strictly inside (0, 1)");
    }
    if (i > 0 && !(xi_grid[i] > xi_grid[i - 1])) {
      throw ArgumentError("xi grid must be strictly ascending");
    }
  }
  spec.validate();
  if (eval.input_dim() != train.input_dim()) {
    throw DimensionError("train and eval sets have different input dimensions");
  }

  const auto clean = minimize_joint(model, train, spec, 0.0, model.initial_parameters(cfg.seed), cfg);

  const std::size_t K = xi_grid.size();
  std::vector<OptimizationResult> runs;
  runs.reserve(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double xi = xi_grid[i];
    auto cold = attempt(model, train, spec, xi, clean.theta, cfg);
    if (i > 0 && runs.back().theta != clean.theta) {
      auto warm = attempt(model, train, spec, xi, runs.back().theta, cfg);
      if (warm.objective < cold.objective) cold = std::move(warm);
    }
    runs.push_back(std::move(cold));
  }

  // Each point must be at least as good on its own objective as every other
  // computed point; restart from a better candidate until that holds.
  constexpr double kImprove = 1e-12;
  for (std::size_t pass = 0; pass < 2 * K; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) {
        if (i == j || runs[j].theta == runs[i].theta) continue;
        const double other = joint_objective(model, runs[j].theta, train, spec, xi_grid[i], cfg.exec);
        if (other < runs[i].objective - kImprove) {
          auto redo = attempt(model, train, spec, xi_grid[i], runs[j].theta, cfg);
          if (redo.objective > other) {
            redo.theta = runs[j].theta;
            redo.objective = other;
            redo.converged = false;
          }
          runs[i] = std::move(redo);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  TradeoffCurve curve;
  curve.attack = spec;
  curve.model = model.name();
  curve.model_params = model.describe();
  curve.dataset = "n_train=" + std::to_string(train.size()) + ",n_eval=" +
                  std::to_string(eval.size()) + ",m=" + std::to_string(train.input_dim());
  curve.seed = cfg.seed;
  std::vector<std::pair<double, double>> ab;
  for (std::size_t i = 0; i < K; ++i) {
    curve.points.push_back(point_from(model, train, eval, xi_grid[i], spec, cfg, runs[i]));
    ab.emplace_back(curve.points.back().alpha, curve.points.back().beta);
  }
  curve.frontier = pareto_filter(ab);
  return curve;
}

std::vector<std::size_t> pareto_filter(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [ai, bi] = points[i];
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (j == i) continue;
      const auto [aj, bj] = points[j];
      if (aj <= ai && bj <= bi && (aj < ai || bj < bi)) dominated = true;
      // Exact duplicates collapse onto the first occurrence.
      if (aj == ai && bj == bi && j < i) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
    return points[a].first < points[b].first;
  });
  return keep;
}

}  // namespace robtrade
