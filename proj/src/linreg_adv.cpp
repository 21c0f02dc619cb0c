#include "robtrade/linreg_adv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "robtrade/errors.hpp"
#include "robtrade/ifa.hpp"
#include "robtrade/rng.hpp"

namespace robtrade {

void LinRegProblem::validate() const {
  if (X.rows() < 1 || X.cols() < 1) throw ArgumentError("empty design matrix");
  if (Y.size() != X.rows()) throw DimensionError("X and Y row counts differ");
  if (theta_star && theta_star->size() != X.cols()) {
    throw DimensionError("theta* length does not match the number of columns");
  }
  for (Index j : support) {
    if (j < 0 || j >= X.cols()) throw DimensionError("support index out of range");
  }
  if (realizable) {
    if (!theta_star) throw PreconditionError("realizable problem without theta*");
    const double gap = (Y - X * *theta_star).cwiseAbs().maxCoeff();
    if (gap > 1e-12) throw PreconditionError("Y differs from X theta*", gap);
  }
}

namespace {

void check_q(double q) {
  if (q != 1.0 && q != 2.0) throw ArgumentError("q must be 1 or 2");
}

void check_xy(const Matrix& X, const Vector& Y) {
  if (X.rows() < 1 || X.cols() < 1) throw ArgumentError("empty design matrix");
  if (Y.size() != X.rows()) throw DimensionError("X and Y row counts differ");
}

// Smoothed stand-ins: |r| ~ sqrt(r^2 + eta^2) - eta and the matching norm.
// Both are written as r^2 / (sqrt(r^2 + eta^2) + eta) to avoid cancellation.
struct Smoothed {
  double eta;

  double abs(double r) const { return r * r / (std::sqrt(r * r + eta * eta) + eta); }
  double abs_d1(double r) const { return r / std::sqrt(r * r + eta * eta); }
  double abs_d2(double r) const {
    const double s = std::sqrt(r * r + eta * eta);
    return eta * eta / (s * s * s);
  }
};

class AdvObjective {
 public:
  AdvObjective(const Matrix& X, const Vector& Y, double epsilon, double q, double xi)
      : X_(X), Y_(Y), eps_(epsilon), q_(q), xi_(xi), n_(static_cast<double>(X.rows())) {}

  void set_smoothing(double eta) { sm_.eta = eta; }

  double norm(const Vector& t) const {
    if (q_ == 1.0) {
      double s = 0.0;
      for (Index j = 0; j < t.size(); ++j) s += sm_.abs(t(j));
      return s;
    }
    return sm_.abs(t.norm());
  }

  double value(const Vector& t) const {
    const Vector r = Y_ - X_ * t;
    const double N = norm(t);
    double adv = 0.0;
    for (Index i = 0; i < r.size(); ++i) {
      const double u = sm_.abs(r(i)) + eps_ * N;
      adv += u * u;
    }
    return (xi_ * adv + (1.0 - xi_) * r.squaredNorm()) / n_;
  }

  void derivatives(const Vector& t, Vector& grad, Matrix& hess) const {
    const Index n = X_.rows(), d = X_.cols();
    const Vector r = Y_ - X_ * t;
    Vector gN(d);
    Matrix hN = Matrix::Zero(d, d);
    if (q_ == 1.0) {
      for (Index j = 0; j < d; ++j) {
        gN(j) = sm_.abs_d1(t(j));
        hN(j, j) = sm_.abs_d2(t(j));
      }
    } else {
      const double s = std::sqrt(t.squaredNorm() + sm_.eta * sm_.eta);
      gN = t / s;
      hN = Matrix::Identity(d, d) / s - t * t.transpose() / (s * s * s);
    }
    const double N = norm(t);

    Vector u(n), a1(n), a2(n);
    for (Index i = 0; i < n; ++i) {
      u(i) = sm_.abs(r(i)) + eps_ * N;
      a1(i) = sm_.abs_d1(r(i));
      a2(i) = sm_.abs_d2(r(i));
    }
    // Rows g_i = d u_i / d theta = -a'(r_i) x_i + eps grad N.
    Matrix G = -(a1.asDiagonal() * X_);
    G.rowwise() += eps_ * gN.transpose();

    grad = (2.0 * xi_ / n_) * (G.transpose() * u) - (2.0 * (1.0 - xi_) / n_) * (X_.transpose() * r);
    hess = (2.0 * xi_ / n_) *
               (G.transpose() * G + X_.transpose() * (u.cwiseProduct(a2)).asDiagonal() * X_ +
                eps_ * u.sum() * hN) +
           (2.0 * (1.0 - xi_) / n_) * (X_.transpose() * X_);
  }

 private:
  const Matrix& X_;
  const Vector& Y_;
  double eps_, q_, xi_, n_;
  Smoothed sm_{1.0};
};

struct StartResult {
  Vector theta;
  int iterations = 0;
  double grad_norm = 0.0;
  // Change of the exact objective over the final smoothing stage.
  double last_stage_change = 0.0;
};

StartResult continuation_newton(AdvObjective& f, Vector theta, const AdvSolverOptions& opts,
                                const std::function<double(const Vector&)>& exact) {
  StartResult out;
  double stage_start = exact(theta);
  Vector g;
  Matrix H;
  double eta = opts.smoothing_start;
  for (;;) {
    f.set_smoothing(eta);
    double fv = f.value(theta);
    for (int it = 0; it < opts.newton_iters_per_stage; ++it) {
      f.derivatives(theta, g, H);
      out.grad_norm = g.cwiseAbs().maxCoeff();
      if (out.grad_norm <= opts.stage_tol * std::max(1.0, fv)) break;
      Vector dir;
      try {
        dir = -damped_cholesky(H, 0.0).llt.solve(g);
      } catch (const SingularHessianError&) {
        dir = -g;
      }
      if (!dir.allFinite() || dir.dot(g) >= 0.0) dir = -g;
      const double slope = g.dot(dir);
      double t = 1.0;
      bool moved = false;
      for (int b = 0; b < 60; ++b, t *= 0.5) {
        const Vector trial = theta + t * dir;
        const double tv = f.value(trial);
        if (tv <= fv + 1e-4 * t * slope) {
          theta = trial;
          fv = tv;
          moved = true;
          break;
        }
      }
      ++out.iterations;
      if (!moved) break;
    }
    const double stage_end = exact(theta);
    out.last_stage_change = std::abs(stage_end - stage_start);
    stage_start = stage_end;
    if (eta <= opts.smoothing_end * (1.0 + 1e-9)) break;
    eta = std::max(opts.smoothing_end, eta * opts.smoothing_factor);
  }
  f.derivatives(theta, g, H);
  out.grad_norm = g.cwiseAbs().maxCoeff();
  out.theta = std::move(theta);
  return out;
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double l1(const Vector& v) { return v.cwiseAbs().sum(); }

}  // namespace

double adv_objective(const Vector& theta, const Matrix& X, const Vector& Y, double epsilon,
                     double q) {
  check_xy(X, Y);
  check_q(q);
  if (theta.size() != X.cols()) throw DimensionError("theta length does not match X");
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be >= 0");
  const double N = lp_norm(theta, q);
  const Vector r = Y - X * theta;
  double s = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    const double u = std::abs(r(i)) + epsilon * N;
    s += u * u;
  }
  return s / static_cast<double>(X.rows());
}

double mean_squared_residual(const Vector& theta, const Matrix& X, const Vector& Y) {
  check_xy(X, Y);
  return (Y - X * theta).squaredNorm() / static_cast<double>(X.rows());
}

double rms_residual(const Vector& theta, const Matrix& X, const Vector& Y) {
  return std::sqrt(mean_squared_residual(theta, X, Y));
}

AdvSolveResult solve_adv_linreg(const Matrix& X, const Vector& Y, double epsilon, double q,
                                double xi, const AdvSolverOptions& opts) {
  check_xy(X, Y);
  check_q(q);
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ArgumentError("epsilon must be >= 0");
  if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
  if (!(opts.smoothing_start >= opts.smoothing_end && opts.smoothing_end > 0.0 &&
        opts.smoothing_factor > 0.0 && opts.smoothing_factor < 1.0)) {
    throw ArgumentError("invalid smoothing schedule");
  }

  AdvSolveResult res;
  const Index d = X.cols();
  if (epsilon == 0.0 || xi == 0.0) {
    // Plain least squares; the pseudoinverse picks the minimum-norm solution.
    res.theta = min_norm_interpolator(X, Y);
    res.objective = xi * adv_objective(res.theta, X, Y, epsilon, q) +
                    (1.0 - xi) * mean_squared_residual(res.theta, X, Y);
    res.start_objectives = {res.objective};
    res.converged = true;
    return res;
  }

  SeededStream rng(0x5eedULL);
  const std::vector<Vector> starts = {Vector::Zero(d), min_norm_interpolator(X, Y),
                                      rng.normal_vector(d)};
  AdvObjective f(X, Y, epsilon, q, xi);
  const auto exact = [&](const Vector& t) {
    return xi * adv_objective(t, X, Y, epsilon, q) + (1.0 - xi) * mean_squared_residual(t, X, Y);
  };

  double best = std::numeric_limits<double>::infinity();
  double stage_change = 0.0;
  for (const auto& s : starts) {
    auto run = continuation_newton(f, s, opts, exact);
    const double value = exact(run.theta);
    res.start_objectives.push_back(value);
    res.newton_iterations += run.iterations;
    if (value < best) {
      best = value;
      res.theta = std::move(run.theta);
      res.smoothed_grad_norm = run.grad_norm;
      stage_change = run.last_stage_change;
    }
  }
  res.objective = best;
  res.final_smoothing = opts.smoothing_end;
  const auto [lo, hi] = std::minmax_element(res.start_objectives.begin(), res.start_objectives.end());
  res.objective_gap_estimate = *hi - *lo;
  // The smoothed gradient is badly scaled at tiny widths, so convergence is
  // judged on the exact objective: stable over the last stage, equal across starts.
  const double scale = std::max(1.0, res.objective);
  res.final_stage_change = stage_change;
  res.converged = stage_change <= 1e-9 * scale && res.objective_gap_estimate <= 1e-9 * scale;
  return res;
}

double lasso_lambda_max(const Matrix& X, const Vector& Y) {
  check_xy(X, Y);
  return 2.0 / static_cast<double>(X.rows()) * (X.transpose() * Y).cwiseAbs().maxCoeff();
}

double lasso_kkt_residual(const Matrix& X, const Vector& Y, const Vector& theta, double lambda) {
  const Vector g = (2.0 / static_cast<double>(X.rows())) * (X.transpose() * (X * theta - Y));
  double worst = 0.0;
  for (Index j = 0; j < theta.size(); ++j) {
    const double v = theta(j) != 0.0 ? std::abs(g(j) + lambda * (theta(j) > 0 ? 1.0 : -1.0))
                                     : std::max(0.0, std::abs(g(j)) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

LassoResult lasso_coordinate_descent(const Matrix& X, const Vector& Y, double lambda,
                                     const LassoOptions& opts,
                                     const std::optional<Vector>& warm_start) {
  check_xy(X, Y);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ArgumentError("lambda must be >= 0");
  const Index n = X.rows(), d = X.cols();
  const double nn = static_cast<double>(n);

  LassoResult res;
  res.theta = warm_start ? *warm_start : Vector::Zero(d);
  if (res.theta.size() != d) throw DimensionError("warm start has wrong length");
  const Vector c = X.colwise().squaredNorm().transpose() / nn;
  Vector r = Y - X * res.theta;

  const auto update = [&](Index j) {
    if (c(j) == 0.0) {
      res.theta(j) = 0.0;
      return 0.0;
    }
    const double old = res.theta(j);
    const double rho = X.col(j).dot(r) / nn + c(j) * old;
    const double next = soft_threshold(rho, lambda / 2.0) / c(j);
    if (next != old) r -= (next - old) * X.col(j);
    res.theta(j) = next;
    return std::abs(next - old);
  };

  // Full sweeps alternate with sweeps over the active set until it settles.
  while (res.sweeps < opts.max_sweeps) {
    for (Index j = 0; j < d; ++j) update(j);
    ++res.sweeps;
    std::vector<Index> active;
    for (Index j = 0; j < d; ++j) {
      if (res.theta(j) != 0.0) active.push_back(j);
    }
    for (int inner = 0; inner < 1000 && res.sweeps < opts.max_sweeps; ++inner) {
      double change = 0.0;
      for (Index j : active) change = std::max(change, update(j));
      ++res.sweeps;
      if (change <= 1e-15 * (1.0 + res.theta.cwiseAbs().maxCoeff())) break;
    }
    r = Y - X * res.theta;
    res.kkt_residual = lasso_kkt_residual(X, Y, res.theta, lambda);
    if (res.kkt_residual <= opts.kkt_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

Vector LassoPath::at(double lambda) const {
  if (lambdas.empty()) throw ArgumentError("empty LASSO path");
  if (lambda >= lambdas.front()) return thetas.front();
  if (lambda < lambdas.back()) throw ArgumentError("lambda below the end of the LASSO path");
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    if (lambda >= lambdas[k]) {
      const double w = (lambdas[k - 1] - lambda) / (lambdas[k - 1] - lambdas[k]);
      return (1.0 - w) * thetas[k - 1] + w * thetas[k];
    }
  }
  return thetas.back();
}

LassoPath lasso_homotopy(const Matrix& X, const Vector& Y, int max_knots) {
  check_xy(X, Y);
  const Index n = X.rows(), d = X.cols();
  const double nn = static_cast<double>(n);
  LassoPath path;
  Vector theta = Vector::Zero(d);
  double lambda = lasso_lambda_max(X, Y);
  path.lambdas.push_back(lambda);
  path.thetas.push_back(theta);
  if (lambda == 0.0) {
    path.complete = true;
    return path;
  }

  std::vector<Index> active;
  std::vector<double> sign;
  {
    const Vector c = (2.0 / nn) * (X.transpose() * Y);
    Index j0 = 0;
    c.cwiseAbs().maxCoeff(&j0);
    active.push_back(j0);
    sign.push_back(c(j0) > 0 ? 1.0 : -1.0);
  }

  for (int knot = 0; knot < max_knots; ++knot) {
    const Index a = static_cast<Index>(active.size());
    Matrix XA(n, a);
    Vector s(a);
    for (Index k = 0; k < a; ++k) {
      XA.col(k) = X.col(active[k]);
      s(k) = sign[k];
    }
    const Matrix G = XA.transpose() * XA;
    Eigen::LDLT<Matrix> ldlt(G);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 1e-12 * G.diagonal().maxCoeff())) {
      throw SingularSystemError("active design block became singular along the LASSO path");
    }
    // theta_A(l) = G^-1 (XA^T Y - (n/2) l s): exact at the current knot.
    const Vector base = ldlt.solve(XA.transpose() * Y);
    const Vector v = (nn / 2.0) * ldlt.solve(s);  // d theta_A / d(-lambda)
    Vector thA = base - lambda * v;
    for (Index k = 0; k < a; ++k) theta(active[k]) = thA(k);

    const Vector r = Y - X * theta;
    const Vector c = (2.0 / nn) * (X.transpose() * r);
    const Vector slope = (2.0 / nn) * (X.transpose() * (XA * v));

    double gamma = lambda;  // step down in lambda, capped at reaching 0
    Index join = -1, leave = -1;
    std::vector<char> is_active(static_cast<std::size_t>(d), 0);
    for (Index j : active) is_active[static_cast<std::size_t>(j)] = 1;
    // With n active columns the residual vanishes linearly in lambda and the
    // inactive correlations scale with it, so no further joins occur.
    for (Index j = 0; j < d && a < n; ++j) {
      if (is_active[static_cast<std::size_t>(j)]) continue;
      for (double sg : {1.0, -1.0}) {
        const double den = 1.0 - sg * slope(j);
        if (den <= 1e-14) continue;
        const double g = (lambda - sg * c(j)) / den;
        if (g > 1e-14 * lambda && g < gamma) {
          gamma = g;
          join = j;
          leave = -1;
        }
      }
    }
    for (Index k = 0; k < a; ++k) {
      if (v(k) == 0.0) continue;
      const double g = -thA(k) / v(k);
      if (g > 1e-14 * lambda && g < gamma) {
        gamma = g;
        leave = k;
        join = -1;
      }
    }

    lambda -= gamma;
    if (join < 0 && leave < 0) lambda = 0.0;
    thA = base - lambda * v;
    for (Index k = 0; k < a; ++k) theta(active[k]) = thA(k);
    if (leave >= 0) {
      theta(active[static_cast<std::size_t>(leave)]) = 0.0;
      active.erase(active.begin() + leave);
      sign.erase(sign.begin() + leave);
    }
    path.lambdas.push_back(lambda);
    path.thetas.push_back(theta);
    if (lambda <= 0.0) {
      path.complete = true;
      break;
    }
    if (join >= 0) {
      const double cj = (2.0 / nn) * X.col(join).dot(Y - X * theta);
      active.push_back(join);
      sign.push_back(cj > 0 ? 1.0 : -1.0);
    }
    if (active.empty()) break;
  }
  return path;
}

Vector ridge_solve(const Matrix& X, const Vector& Y, double lambda) {
  check_xy(X, Y);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ArgumentError("lambda must be >= 0");
  const Index n = X.rows(), d = X.cols();
  const double nn = static_cast<double>(n);
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    if (qr.rank() < d) throw SingularSystemError("lambda = 0 needs a design of full column rank");
    return qr.solve(Y);
  }
  if (d > n) {
    Matrix K = X * X.transpose();
    K.diagonal().array() += nn * lambda;
    Eigen::LLT<Matrix> llt(K);
    if (llt.info() != Eigen::Success) throw SingularSystemError("ridge system is singular");
    return X.transpose() * llt.solve(Y);
  }
  Matrix A = X.transpose() * X / nn;
  A.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) throw SingularSystemError("ridge system is singular");
  return llt.solve(X.transpose() * Y / nn);
}

Vector min_norm_interpolator(const Matrix& X, const Vector& Y) {
  check_xy(X, Y);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(X);
  return cod.solve(Y);
}

EquivalenceReport check_lasso_equivalence(const LinRegProblem& problem, double epsilon) {
  if (!problem.realizable || !problem.theta_star) {
    throw PreconditionError("equivalence check needs a realizable problem (Y = X theta*)");
  }
  problem.validate();
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be >= 0");
  const Matrix& X = problem.X;
  const Vector& Y = problem.Y;
  const Vector& ts = *problem.theta_star;

  EquivalenceReport rep;
  const auto adv = solve_adv_linreg(X, Y, epsilon, 1.0);
  rep.theta_adv = adv.theta;
  rep.solver_converged = adv.converged;
  rep.adv_objective_at_optimum = adv.objective;
  rep.b_hat = rms_residual(adv.theta, X, Y);

  // Residual level of LASSO grows with lambda. Match on the exact homotopy
  // path, then polish with coordinate descent; plain log-bisection with
  // coordinate descent is the fallback when the path breaks down.
  constexpr double kMatchTol = 1e-6;
  const double lmax = lasso_lambda_max(X, Y);
  const auto residual_at = [&](const Vector& t) { return rms_residual(t, X, Y); };
  double lambda = lmax;
  Vector theta_l = Vector::Zero(X.cols());
  bool matched = false;
  try {
    const LassoPath path = lasso_homotopy(X, Y);
    if (path.complete) {
      double hi = path.lambdas.front(), lo = path.lambdas.back();
      if (residual_at(path.at(lo)) >= rep.b_hat) {
        hi = lo;
      } else {
        for (int it = 0; it < 200 && hi - lo > 1e-300; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          (residual_at(path.at(mid)) > rep.b_hat ? hi : lo) = mid;
        }
      }
      lambda = hi;
      theta_l = path.at(lambda);
      matched = std::abs(residual_at(theta_l) - rep.b_hat) <= kMatchTol;
    }
  } catch (const SingularSystemError&) {
  }
  if (matched && lambda > 0.0) {
    LassoOptions polish;
    polish.max_sweeps = 20000;
    const auto fit = lasso_coordinate_descent(X, Y, lambda, polish, theta_l);
    if (fit.kkt_residual < lasso_kkt_residual(X, Y, theta_l, lambda)) theta_l = fit.theta;
  }
  if (!matched) {
    double lo = std::log(lmax * 1e-12), hi = std::log(lmax);
    std::optional<Vector> warm;
    for (int it = 0; it < 200; ++it) {
      lambda = std::exp(0.5 * (lo + hi));
      const auto fit = lasso_coordinate_descent(X, Y, lambda, {}, warm);
      warm = theta_l = fit.theta;
      const double b = residual_at(theta_l);
      if (std::abs(b - rep.b_hat) <= kMatchTol) break;
      (b > rep.b_hat ? hi : lo) = std::log(lambda);
    }
  }
  rep.lambda_matched = lambda;
  rep.theta_lasso = theta_l;
  rep.b_lasso = residual_at(theta_l);
  rep.lasso_kkt = lasso_kkt_residual(X, Y, theta_l, lambda);

  rep.discrepancy = (rep.theta_adv - rep.theta_lasso).norm();
  rep.discrepancy_tolerance = 1e-3 * (1.0 + ts.norm());
  rep.b_bound = epsilon * l1(ts);
  rep.bound_satisfied = rep.b_hat <= rep.b_bound + 1e-9;
  rep.l1_optimality = l1(rep.theta_adv) <= l1(rep.theta_lasso) + 1e-6;
  rep.adv_objective_at_truth = adv_objective(ts, X, Y, epsilon, 1.0);
  rep.truth_identity_value = epsilon * epsilon * l1(ts) * l1(ts);
  return rep;
}

std::string to_string(RestrictedEigenvalueEstimate::Certificate c) {
  return c == RestrictedEigenvalueEstimate::Certificate::exact_on_support ? "exact-on-support"
                                                                           : "sampled";
}

RestrictedEigenvalueEstimate restricted_eigenvalue_estimate(const Matrix& X,
                                                            const std::vector<Index>& support,
                                                            double zeta, int num_samples,
                                                            std::uint64_t seed) {
  if (support.empty()) throw ArgumentError("support must be nonempty");
  if (!(zeta >= 1.0)) throw ArgumentError("zeta must be >= 1");
  if (num_samples < 0) throw ArgumentError("num_samples must be >= 0");
  const Index d = X.cols();
  const double nn = static_cast<double>(X.rows());
  std::vector<bool> on(static_cast<std::size_t>(d), false);
  for (Index j : support) {
    if (j < 0 || j >= d) throw DimensionError("support index out of range");
    on[static_cast<std::size_t>(j)] = true;
  }
  std::vector<Index> off;
  for (Index j = 0; j < d; ++j) {
    if (!on[static_cast<std::size_t>(j)]) off.push_back(j);
  }

  RestrictedEigenvalueEstimate est;
  Matrix XS(X.rows(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) XS.col(static_cast<Index>(k)) = X.col(support[k]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(XS.transpose() * XS / nn, Eigen::EigenvaluesOnly);
  est.support_eigenvalue = std::max(0.0, es.eigenvalues().minCoeff());
  est.sampled_min = std::numeric_limits<double>::infinity();

  SeededStream rng(seed);
  Vector D(d);
  for (int t = 0; t < num_samples; ++t) {
    D.setZero();
    double on_l1 = 0.0;
    for (Index j : support) {
      D(j) = rng.normal();
      on_l1 += std::abs(D(j));
    }
    if (!off.empty()) {
      // Alternate dense and sparse off-support parts.
      Vector part = Vector::Zero(static_cast<Index>(off.size()));
      if (t % 2 == 0) {
        part = rng.normal_vector(part.size());
      } else {
        const int hits = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(off.size(), 4)));
        for (int h = 0; h < hits; ++h) part(static_cast<Index>(rng.below(off.size()))) = rng.normal();
      }
      const double part_l1 = part.cwiseAbs().sum();
      const double target = (1.0 - rng.uniform()) * zeta * on_l1;
      if (part_l1 > 0.0) {
        for (std::size_t k = 0; k < off.size(); ++k) D(off[k]) = part(static_cast<Index>(k)) * target / part_l1;
      }
    }
    const double norm = D.norm();
    if (norm == 0.0) continue;
    D /= norm;
    est.sampled_min = std::min(est.sampled_min, (X * D).squaredNorm() / nn);
  }
  est.tau_hat = std::min(est.support_eigenvalue, est.sampled_min);
  est.certificate = est.sampled_min < est.support_eigenvalue
                        ? RestrictedEigenvalueEstimate::Certificate::sampled
                        : RestrictedEigenvalueEstimate::Certificate::exact_on_support;
  return est;
}

RecoveryBoundReport check_recovery_bound(const LinRegProblem& problem, const Vector& theta_adv,
                                        double epsilon, double tau_hat) {
  if (!problem.realizable || !problem.theta_star) {
    throw PreconditionError("error bound needs a realizable problem with known theta*");
  }
  problem.validate();
  const Vector& ts = *problem.theta_star;
  if (theta_adv.size() != ts.size()) throw DimensionError("theta length does not match theta*");

  RecoveryBoundReport rep;
  const Vector D = theta_adv - ts;
  rep.error_l2 = D.norm();
  rep.tau_hat = tau_hat;
  std::vector<bool> on(static_cast<std::size_t>(D.size()), false);
  for (Index j : problem.support) on[static_cast<std::size_t>(j)] = true;
  for (Index j = 0; j < D.size(); ++j) {
    (on[static_cast<std::size_t>(j)] ? rep.cone_on_support_l1 : rep.cone_off_support_l1) +=
        std::abs(D(j));
  }
  rep.in_cone = rep.cone_off_support_l1 <= rep.cone_on_support_l1 + 1e-6;

  if (!(tau_hat > 0.0)) {
    rep.skipped = true;
    return rep;
  }
  rep.bound_l1 = epsilon * l1(ts) / std::sqrt(tau_hat);
  rep.bound_l2 = epsilon * ts.norm() / std::sqrt(tau_hat);
  rep.bound_l1_holds = rep.error_l2 <= rep.bound_l1 + 1e-9;
  rep.bound_l2_holds = rep.error_l2 <= rep.bound_l2 + 1e-9;
  return rep;
}

WeightedPathReport weighted_tradeoff_path(const LinRegProblem& problem, double epsilon, NormOrder p,
                              const std::vector<double>& xi_grid, double tau_hat) {
  if (!problem.realizable || !problem.theta_star) {
    throw PreconditionError("curve bounds need a realizable problem with known theta*");
  }
  problem.validate();
  if (!p.is_infinity() && !p.is_two()) throw ArgumentError("p must be 2 or inf");
  const double q = p.dual();
  const Vector& ts = *problem.theta_star;

  WeightedPathReport rep;
  rep.epsilon = epsilon;
  rep.q = q;
  rep.tau_hat = tau_hat;
  rep.b_hat_monotone = true;
  for (double xi : xi_grid) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
    const auto sol = solve_adv_linreg(problem.X, problem.Y, epsilon, q, xi);
    WeightedPathPoint pt;
    pt.xi = xi;
    pt.theta = sol.theta;
    pt.alpha = mean_squared_residual(sol.theta, problem.X, problem.Y);
    pt.beta = adv_objective(sol.theta, problem.X, problem.Y, epsilon, q);
    pt.b_hat = std::sqrt(pt.alpha);
    pt.b_bound = epsilon * std::sqrt(xi) * lp_norm(ts, q);
    pt.b_bound_holds = pt.b_hat <= pt.b_bound + 1e-9;
    pt.error_l2 = (sol.theta - ts).norm();
    if (tau_hat > 0.0) {
      const double base = epsilon * l1(ts) / std::sqrt(tau_hat);
      pt.bound_xi = xi * base;
      pt.bound_sqrt_xi = std::sqrt(xi) * base;
      pt.bound_xi_holds = pt.error_l2 <= pt.bound_xi + 1e-9;
      pt.bound_sqrt_xi_holds = pt.error_l2 <= pt.bound_sqrt_xi + 1e-9;
    }
    pt.converged = sol.converged;
    if (!rep.points.empty() && pt.b_hat < rep.points.back().b_hat - 1e-9) rep.b_hat_monotone = false;
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

DivergentInterpolator construct_divergent_interpolators(const Matrix& X_train,
                                                        const Vector& Y_train,
                                                        const Matrix& X_eval,
                                                        const Vector& Y_eval, double B) {
  check_xy(X_train, Y_train);
  check_xy(X_eval, Y_eval);
  if (X_eval.cols() != X_train.cols()) throw DimensionError("train and eval designs differ in width");
  if (!(B >= 0.0) || !std::isfinite(B)) throw ArgumentError("B must be finite and >= 0");

  const Index d = X_train.cols();
  Eigen::JacobiSVD<Matrix> svd(X_train, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double tol = std::max(X_train.rows(), d) * std::numeric_limits<double>::epsilon() *
                     (sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  if (rank >= d) {
    throw ConstructionImpossibleError("training design has a trivial null space");
  }
  const Matrix null_basis = svd.matrixV().rightCols(d - rank);
  const Matrix M = X_eval * null_basis;
  Eigen::JacobiSVD<Matrix> msvd(M, Eigen::ComputeFullV);
  if (msvd.singularValues().size() == 0 || msvd.singularValues()(0) <= 1e-12) {
    throw ConstructionImpossibleError("every null direction of the training design is also "
                                      "invisible to the evaluation design");
  }

  DivergentInterpolator out;
  out.theta_base = min_norm_interpolator(X_train, Y_train);
  out.null_direction = null_basis * msvd.matrixV().col(0);
  out.null_direction.normalize();
  const Vector a = X_eval * out.null_direction;
  const Vector e0 = Y_eval - X_eval * out.theta_base;
  // Push against the base residual so the cross term cannot reduce the loss.
  const double magnitude = std::sqrt(B / a.squaredNorm()) * 1.01;
  out.scale = e0.dot(a) > 0.0 ? -magnitude : magnitude;
  out.theta_B = out.theta_base + out.scale * out.null_direction;
  out.train_loss_base = (Y_train - X_train * out.theta_base).squaredNorm();
  out.train_loss = (Y_train - X_train * out.theta_B).squaredNorm();
  out.eval_loss = (Y_eval - X_eval * out.theta_B).squaredNorm();
  return out;
}

}  // namespace robtrade
