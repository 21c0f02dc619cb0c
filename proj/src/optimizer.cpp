#include "robtrade/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>
#include <limits>
#include <sstream>

#include "robtrade/batch.hpp"
#include "robtrade/errors.hpp"
#include "robtrade/ifa.hpp"
#include "robtrade/kernels.hpp"

namespace robtrade {

std::string to_string(OptimizerConfig::Method method) {
  return method == OptimizerConfig::Method::newton ? "newton" : "gradient_descent";
}

OptimizerConfig::Method parse_optimizer_method(const std::string& text) {
  if (text == "newton") return OptimizerConfig::Method::newton;
  if (text == "gd" || text == "gradient_descent") return OptimizerConfig::Method::gradient_descent;
  throw ArgumentError("unknown optimizer method '" + text + "' (expected gd or newton)");
}

namespace {

struct Evaluation {
  double value = 0.0;
  Vector grad;
  Matrix deltas;          // inner maximizers, empty when xi == 0
  Vector sample_values;   // adversarial per-sample losses, empty when xi == 0
};

// Pieces of the adversarial losses within this relative gap of the maximum
// enter the local model.
constexpr double kPieceTolerance = 1e-3;

class JointObjective {
 public:
  JointObjective(const LossModel& model, const LabeledDataset& data, const AttackSpec& spec,
                 double xi, Execution exec)
      : model_(model), data_(data), spec_(spec), xi_(xi), exec_(exec) {}

  double xi() const { return xi_; }
  Index n() const { return data_.size(); }

  Evaluation evaluate(const Vector& theta, bool with_gradient) const {
    Evaluation ev;
    double beta = 0.0, alpha = 0.0;
    if (xi_ > 0.0) {
      auto inner = solve_inner(model_, theta, data_, spec_, exec_);
      beta = inner.batch_value;
      ev.deltas = std::move(inner.deltas);
      ev.sample_values = std::move(inner.losses);
    }
    if (xi_ < 1.0) alpha = batch_loss(model_, theta, data_, exec_);
    ev.value = xi_ * beta + (1.0 - xi_) * alpha;
    if (with_gradient) {
      ev.grad = Vector::Zero(theta.size());
      if (xi_ > 0.0) ev.grad += xi_ * perturbed_batch_gradient(model_, theta, data_, ev.deltas, exec_);
      if (xi_ < 1.0) ev.grad += (1.0 - xi_) * batch_gradient(model_, theta, data_, exec_);
    }
    return ev;
  }

  Matrix hessian(const Vector& theta, const Evaluation& ev) const {
    Matrix H = Matrix::Zero(theta.size(), theta.size());
    if (xi_ > 0.0) H += xi_ * perturbed_batch_hessian(model_, theta, data_, ev.deltas, exec_);
    if (xi_ < 1.0) H += (1.0 - xi_) * batch_hessian(model_, theta, data_, exec_);
    return H;
  }

  std::vector<kernels::SamplePieces> pieces(const Vector& theta, const Evaluation& ev) const {
    if (xi_ == 0.0 || spec_.epsilon == 0.0) return {};
    return exec_ == Execution::serial
               ? kernels::serial::pieces(model_, theta, data_, spec_, ev.sample_values,
                                         kPieceTolerance)
               : kernels::omp::pieces(model_, theta, data_, spec_, ev.sample_values,
                                      kPieceTolerance);
  }

  Vector sample_gradient(const Vector& theta, const Evaluation& ev, Index i) const {
    const Vector x = data_.x(i) + ev.deltas.row(i).transpose();
    return *model_.derivatives(theta, x, data_.y(i), DerivativeKind::grad_theta).grad_theta;
  }

 private:
  const LossModel& model_;
  const LabeledDataset& data_;
  const AttackSpec& spec_;
  double xi_;
  Execution exec_;
};

double sup_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Euclidean projection onto the probability simplex.
void project_simplex(double* v, Index k) {
  std::vector<double> u(v, v + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  for (Index i = 0; i < k; ++i) {
    css += u[static_cast<std::size_t>(i)];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) tau = t;
  }
  for (Index i = 0; i < k; ++i) v[i] = std::max(0.0, v[i] - tau);
}

// Local model of the objective around theta,
//   m(d) = F + w sum_i [max_c (v_ic + g_ic^T d) - v_i] + g0^T d + 0.5 d^T B d,
// where samples with a single piece are folded into g0. The minimizer is
// d = -B^{-1} g(lambda), lambda maximizing the concave dual over a product
// of simplices; g(lambda) is an aggregated subgradient.
struct ModelStep {
  Vector direction;
  Vector aggregate;  // g(lambda)
  double predicted = 0.0;  // m(d) - F, <= 0
};

template <class SolveB>
ModelStep model_step(const Evaluation& cur, const std::vector<kernels::SamplePieces>& pieces,
                     const std::vector<Vector>& own_grads, double w, double gap_tol,
                     SolveB&& solve_b) {
  // Multi-piece samples become dual blocks; the rest stays in g0.
  Vector g0 = cur.grad;
  std::vector<Index> block_start;
  std::vector<double> values;
  std::vector<Vector> grads;
  std::vector<double> base;  // v_i of each block
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].size() < 2) continue;
    g0 -= w * own_grads[i];
    block_start.push_back(static_cast<Index>(values.size()));
    base.push_back(cur.sample_values(static_cast<Index>(i)));
    for (const auto& pc : pieces[i]) {
      values.push_back(pc.value);
      grads.push_back(pc.grad);
    }
  }
  const Index nb = static_cast<Index>(block_start.size());
  const Index np = static_cast<Index>(values.size());
  block_start.push_back(np);

  ModelStep out;
  const Vector k0 = solve_b(g0);
  if (nb == 0) {
    out.aggregate = g0;
    out.direction = -k0;
    out.predicted = -0.5 * g0.dot(k0);
    return out;
  }

  std::vector<Vector> K(static_cast<std::size_t>(np));
  double lip = 0.0;
  for (Index c = 0; c < np; ++c) {
    K[static_cast<std::size_t>(c)] = solve_b(grads[static_cast<std::size_t>(c)]);
    lip += w * w * grads[static_cast<std::size_t>(c)].dot(K[static_cast<std::size_t>(c)]);
  }
  lip = std::max(lip, 1e-300);

  // Start from the current maximizers (largest value in each block).
  Vector lam = Vector::Zero(np);
  for (Index b = 0; b < nb; ++b) {
    Index arg = block_start[b];
    for (Index c = block_start[b]; c < block_start[b + 1]; ++c) {
      if (values[static_cast<std::size_t>(c)] > values[static_cast<std::size_t>(arg)]) arg = c;
    }
    lam(arg) = 1.0;
  }
  const auto binv_g = [&](const Vector& l) {
    Vector r = k0;
    for (Index c = 0; c < np; ++c) {
      if (l(c) != 0.0) r += w * l(c) * K[static_cast<std::size_t>(c)];
    }
    return r;
  };
  // Primal minus dual at d(lam); only the max terms survive the cancellation.
  const auto gap = [&](const Vector& l) {
    const Vector d = -binv_g(l);
    double total = 0.0;
    for (Index b = 0; b < nb; ++b) {
      double best = -std::numeric_limits<double>::infinity(), mix = 0.0;
      for (Index c = block_start[b]; c < block_start[b + 1]; ++c) {
        const double lin = values[static_cast<std::size_t>(c)] + grads[static_cast<std::size_t>(c)].dot(d);
        best = std::max(best, lin);
        mix += l(c) * lin;
      }
      total += w * (best - mix);
    }
    return total;
  };
  // FISTA on the dual, maximizing sum w lam v - 0.5 g(lam)^T B^{-1} g(lam).
  Vector y = lam, prev = lam;
  double tk = 1.0;
  for (int it = 0; it < 200000; ++it) {
    const Vector bg = binv_g(y);
    Vector next = y;
    for (Index c = 0; c < np; ++c) {
      const double grad = w * values[static_cast<std::size_t>(c)] -
                          w * grads[static_cast<std::size_t>(c)].dot(bg);
      next(c) += grad / lip;
    }
    for (Index b = 0; b < nb; ++b) {
      project_simplex(next.data() + block_start[b], block_start[b + 1] - block_start[b]);
    }
    const double change = (next - prev).cwiseAbs().maxCoeff();
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    y = next + ((tk - 1.0) / tn) * (next - prev);
    prev = next;
    tk = tn;
    if (change == 0.0 || (it % 16 == 15 && gap(prev) <= gap_tol)) break;
  }
  lam = prev;

  out.aggregate = g0;
  for (Index c = 0; c < np; ++c) out.aggregate += w * lam(c) * grads[static_cast<std::size_t>(c)];
  out.direction = -binv_g(lam);
  const Vector& d = out.direction;
  double model = g0.dot(d);
  // 0.5 d^T B d = 0.5 g(lam)^T B^{-1} g(lam) = -0.5 g(lam)^T d.
  model += -0.5 * out.aggregate.dot(d);
  for (Index b = 0; b < nb; ++b) {
    double best = -std::numeric_limits<double>::infinity();
    for (Index c = block_start[b]; c < block_start[b + 1]; ++c) {
      best = std::max(best, values[static_cast<std::size_t>(c)] +
                                grads[static_cast<std::size_t>(c)].dot(d));
    }
    model += w * (best - base[static_cast<std::size_t>(b)]);
  }
  out.predicted = std::min(model, 0.0);
  return out;
}

}  // namespace

OptimizationResult minimize_joint(const LossModel& model, const LabeledDataset& data,
                                  const AttackSpec& spec, double xi, const Vector& init,
                                  const OptimizerConfig& cfg) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
  if (init.size() != model.param_dim()) throw DimensionError("initial parameters have wrong length");
  if (cfg.max_iters < 0 || cfg.max_backtracks < 1 || !(cfg.backtrack > 0.0 && cfg.backtrack < 1.0)) {
    throw ArgumentError("invalid optimizer configuration");
  }
  spec.validate();

  const JointObjective objective(model, data, spec, xi, cfg.exec);
  const bool newton = cfg.method == OptimizerConfig::Method::newton;
  const double w = xi / static_cast<double>(data.size());

  Vector theta = init;
  Evaluation cur = objective.evaluate(theta, true);
  if (!std::isfinite(cur.value) || !cur.grad.allFinite()) {
    throw OptimizationError("objective is not finite at the initial point");
  }

  OptimizationResult res;
  res.initial_objective = cur.value;
  res.stop_reason = "iteration limit";
  double scale = 1.0;  // gradient-descent step length
  double stationarity = sup_norm(cur.grad);
  // Dual accuracy needed for the aggregate to resolve grad_tol.
  const double gap_tol = 1e-2 * cfg.grad_tol * cfg.grad_tol;

  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const auto pieces = objective.pieces(theta, cur);
    std::vector<Vector> own(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (pieces[i].size() > 1) own[i] = objective.sample_gradient(theta, cur, static_cast<Index>(i));
    }

    ModelStep step;
    bool have_step = false;
    if (newton) {
      try {
        const auto dc = damped_cholesky(objective.hessian(theta, cur), 0.0);
        step = model_step(cur, pieces, own, w, gap_tol, [&](const Vector& g) { return Vector(dc.llt.solve(g)); });
        have_step = step.direction.allFinite() && step.predicted < 0.0;
      } catch (const SingularHessianError&) {
      }
    }
    if (!have_step) {
      step = model_step(cur, pieces, own, w, gap_tol, [&](const Vector& g) { return Vector(scale * g); });
    }
    stationarity = sup_norm(step.aggregate);
    if (stationarity <= cfg.grad_tol) {
      res.converged = true;
      res.stop_reason = "gradient tolerance";
      break;
    }

    // Accept tiny non-decreases only when they come with a smaller gradient;
    // near the optimum the predicted decrease drops below rounding in F.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(cur.value));
    bool accepted = false;
    Evaluation next;
    Vector trial;
    double t = 1.0;
    for (int b = 0; b < cfg.max_backtracks; ++b, t *= cfg.backtrack) {
      trial = theta + t * step.direction;
      next = objective.evaluate(trial, false);
      if (std::isfinite(next.value) && next.value <= cur.value + cfg.armijo_c * t * step.predicted) {
        accepted = true;
        break;
      }
      if (std::isfinite(next.value) && next.value <= cur.value + noise) {
        Evaluation with_grad = objective.evaluate(trial, true);
        if (with_grad.grad.allFinite() && sup_norm(with_grad.grad) < sup_norm(cur.grad)) {
          next = std::move(with_grad);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      res.stop_reason = "line search stalled";
      break;
    }
    if (next.grad.size() == 0) next = objective.evaluate(trial, true);
    if (!std::isfinite(next.value) || !next.grad.allFinite()) {
      std::ostringstream msg;
      msg << "objective diverged at iteration " << it << " (value " << next.value << ")";
      throw OptimizationError(msg.str());
    }
    theta = std::move(trial);
    cur = std::move(next);
    if (!have_step) scale *= 2.0 * t;
  }
  if (it == cfg.max_iters && !res.converged) {
    // One last look at the final iterate.
    const auto pieces = objective.pieces(theta, cur);
    std::vector<Vector> own(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (pieces[i].size() > 1) own[i] = objective.sample_gradient(theta, cur, static_cast<Index>(i));
    }
    stationarity = sup_norm(
        model_step(cur, pieces, own, w, gap_tol, [&](const Vector& g) { return Vector(scale * g); }).aggregate);
    if (stationarity <= cfg.grad_tol) {
      res.converged = true;
      res.stop_reason = "gradient tolerance";
    }
  }

  res.theta = std::move(theta);
  res.objective = cur.value;
  res.grad_norm = stationarity;
  res.iterations = it;
  return res;
}

}  // namespace robtrade
