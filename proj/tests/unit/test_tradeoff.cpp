#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "robtrade/attack.hpp"
#include "robtrade/batch.hpp"
#include "robtrade/models.hpp"
#include "robtrade/rng.hpp"
#include "robtrade/tradeoff.hpp"

using namespace robtrade;

namespace {
LabeledDataset regression(Index n, Index m, std::uint64_t seed) {
  SeededStream rng(seed);
  return LabeledDataset(rng.normal_matrix(n, m), rng.normal_vector(n));
}
AttackSpec box(double eps) {
  AttackSpec s;
  s.epsilon = eps;
  return s;
}
}  // namespace

TEST_CASE("joint objective at the ends of the weight range") {
  const ShallowQuadNet m(3, {1.0, 0.5}, 0.1);
  const auto data = regression(15, 3, 1);
  SeededStream rng(2);
  const Vector th = rng.normal_vector(6);
  const auto spec = box(0.1);
  CHECK(joint_objective(m, th, data, spec, 0) == doctest::Approx(batch_loss(m, th, data)));
  CHECK(joint_objective(m, th, data, spec, 1) ==
        doctest::Approx(adversarial_batch_loss(m, th, data, spec)));
  CHECK(joint_objective(m, th, data, box(0), 0.5) == doctest::Approx(batch_loss(m, th, data)));
  const double mid = joint_objective(m, th, data, spec, 0.3);
  CHECK(mid == doctest::Approx(0.7 * batch_loss(m, th, data) +
                               0.3 * adversarial_batch_loss(m, th, data, spec)));
}

TEST_CASE("danskin gradient") {
  const auto data = regression(12, 4, 3);
  const LinearModel lin(4);
  SeededStream rng(4);
  for (int t = 0; t < 10; ++t) {
    const Vector th = rng.normal_vector(4);
    CHECK(oracle::rel_err(danskin_gradient(lin, th, data, box(0)), batch_gradient(lin, th, data)) <
          1e-13);
    // derivative of (1/n) sum (|r_i| + eps |theta|_1)^2 away from kinks
    const double eps = 0.05;
    Vector g = Vector::Zero(4);
    for (Index i = 0; i < 12; ++i) {
      const double r = data.y(i) - data.x(i).dot(th);
      const double v = std::abs(r) + eps * th.lpNorm<1>();
      const Vector dv = -(r > 0 ? 1.0 : -1.0) * data.x(i) + eps * th.cwiseSign();
      g += 2 * v * dv / 12;
    }
    CHECK(oracle::rel_err(danskin_gradient(lin, th, data, box(eps)), g) < 1e-12);
  }
  const ShallowQuadNet q(3, {1.0, 0.5}, 0.1);
  const auto qd = regression(8, 3, 5);
  const Vector th = rng.normal_vector(6);
  const auto f = [&](const Vector& v) { return adversarial_batch_loss(q, v, qd, box(0.05)); };
  CHECK(oracle::rel_err(danskin_gradient(q, th, qd, box(0.05)), oracle::fd5_gradient(f, th, 1e-6)) <
        1e-4);
}

TEST_CASE("pareto filter") {
  using P = std::vector<std::pair<double, double>>;
  CHECK(pareto_filter(P{{1, 3}, {2, 2}, {3, 1}, {2.5, 2.5}}) == std::vector<std::size_t>{0, 1, 2});
  CHECK(pareto_filter(P{{4, 4}}) == std::vector<std::size_t>{0});
  CHECK(pareto_filter(P{{3, 1}, {1, 3}, {2, 2}}) == std::vector<std::size_t>{1, 2, 0});
  CHECK(pareto_filter(P{{1, 1}, {1, 1}}) == std::vector<std::size_t>{0});
  CHECK(pareto_filter(P{}).empty());
  SeededStream rng(6);
  for (int t = 0; t < 100; ++t) {
    P pts;
    const auto k = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < k; ++i) {
      pts.emplace_back(std::round(4 * rng.uniform()), std::round(4 * rng.uniform()));
    }
    auto a = pareto_filter(pts);
    auto b = oracle::naive_pareto(pts);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("location model at full weight moves toward the attack-aware minimizer") {
  const LocationModel m(1);
  Matrix X(3, 1);
  X << 0, 0, 3;
  const LabeledDataset data(X, Vector::Zero(3));
  OptimizerConfig cfg;
  cfg.method = OptimizerConfig::Method::newton;
  cfg.grad_tol = 1e-10;
  const auto pt = optimize_point(m, data, 1.0, box(0.3), cfg);
  CHECK(pt.converged);
  CHECK(pt.theta.values()(0) == doctest::Approx(0.9).epsilon(1e-8));
  CHECK(oracle::location_adversarial_minimizer({0, 0, 3}, 0.3) == doctest::Approx(0.9).epsilon(1e-8));
}

TEST_CASE("linear model without attack: every weight gives least squares") {
  const auto data = regression(20, 3, 7);
  const LinearModel lin(3);
  OptimizerConfig cfg;
  cfg.method = OptimizerConfig::Method::newton;
  const auto curve = sweep_curve(lin, data, data, default_xi_grid(), box(0), cfg);
  REQUIRE(curve.points.size() == 5);
  const Vector ls = oracle::pinv_solve(data.X(), data.Y());
  for (const auto& p : curve.points) {
    CHECK(p.converged);
    CHECK((p.theta.values() - ls).norm() < 1e-8);
    CHECK(p.alpha == doctest::Approx(p.beta));
  }
  CHECK(curve.frontier.size() == 1);
}

TEST_CASE("quadnet endpoints are ordered and points are scalar-optimal") {
  const ShallowQuadNet m(3, {1.0, 0.5}, 0.1);
  const auto data = regression(25, 3, 9);
  OptimizerConfig cfg;
  cfg.method = OptimizerConfig::Method::newton;
  const auto spec = box(0.05);
  const auto curve = sweep_curve(m, data, data, {0.001, 0.5, 0.999}, spec, cfg);
  const auto& lo = curve.points.front();
  const auto& hi = curve.points.back();
  CHECK(hi.alpha >= lo.alpha - 1e-6);
  CHECK(hi.beta <= lo.beta + 1e-6);
  for (const auto& p : curve.points) {
    CHECK(p.converged);
    const double own = joint_objective(m, p.theta.values(), data, spec, p.xi);
    for (const auto& o : curve.points) {
      CHECK(own <= joint_objective(m, o.theta.values(), data, spec, p.xi) + 1e-8);
    }
  }
  CHECK(default_xi_grid() == std::vector<double>{0.001, 0.25, 0.5, 0.75, 0.999});
}
