#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "robtrade/attack.hpp"
#include "robtrade/batch.hpp"
#include "robtrade/errors.hpp"
#include "robtrade/models.hpp"
#include "robtrade/quadratic_extrema.hpp"
#include "robtrade/rng.hpp"

using namespace robtrade;

constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}
}  // namespace

TEST_CASE("hoelder direction examples") {
  CHECK(holder_direction(vec({3, -4}), NormOrder::two()).isApprox(vec({0.6, -0.8})));
  CHECK(holder_direction(vec({3, -4}), NormOrder::infinity()) == vec({1, -1}));
  CHECK(holder_direction(vec({2, 0, -1}), NormOrder::infinity()) == vec({1, 0, -1}));
  const Vector g = vec({1, 1, 0});
  const Vector phi = holder_direction(g, NormOrder::of(3));
  CHECK(NormOrder::of(3).norm(phi) == doctest::Approx(1));
  CHECK(phi.dot(g) == doctest::Approx(lp_norm(g, 1.5)));
  CHECK(phi(2) == 0);
  CHECK_THROWS_AS(holder_direction(Vector::Zero(3), NormOrder::two()), DegenerateGradientError);
}

TEST_CASE("hoelder direction property: unit norm, equality case, scale invariance") {
  SeededStream rng(9);
  for (double p : {1.5, 2.0, 3.0, 7.0, kInf}) {
    const NormOrder P = NormOrder::of(p);
    for (int t = 0; t < 50; ++t) {
      const Vector g = rng.normal_vector(5);
      const Vector phi = holder_direction(g, P);
      CHECK(P.norm(phi) == doctest::Approx(1).epsilon(1e-12));
      CHECK(phi.dot(g) == doctest::Approx(P.dual_norm(g)).epsilon(1e-12));
      CHECK((holder_direction(3.7 * g, P) - phi).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("ball projection") {
  CHECK(project_lp_ball(vec({0.1, 0.2}), 1, NormOrder::two()) == vec({0.1, 0.2}));
  CHECK(project_lp_ball(vec({3, 4}), 1, NormOrder::two()).isApprox(vec({0.6, 0.8})));
  CHECK(project_lp_ball(vec({2, -0.5}), 1, NormOrder::infinity()) == vec({1, -0.5}));
  CHECK_THROWS_AS(project_lp_ball(vec({1, 1}), 1, NormOrder::of(3)), ArgumentError);
}

TEST_CASE("linear closed-form attack") {
  const auto a = linear_model_attack(vec({1, -1}), vec({1, 0}), 0, 0.1);
  CHECK(a.delta.isApprox(vec({0.1, -0.1})));
  CHECK(a.loss == doctest::Approx(1.44));
  CHECK(linear_model_attack(vec({1, -1}), vec({1, 0}), 0, 0).delta.isZero(0));
  CHECK(linear_model_attack(vec({1, 0}), vec({2, 5}), 2, 0.3).loss == doctest::Approx(0.09));
  CHECK(linear_model_attack(vec({1, 0}), vec({2, 5}), 2, 0.3).delta(1) == 0);
}

TEST_CASE("linear model: closed form, corner oracle and PGD agree for p = inf") {
  SeededStream rng(21);
  for (int t = 0; t < 40; ++t) {
    const Index d = 1 + static_cast<Index>(rng.below(10));
    const LinearModel m(d);
    const Vector th = rng.normal_vector(d), x = rng.normal_vector(d);
    const double y = rng.normal(), eps = 0.05 + rng.uniform();
    AttackSpec spec;
    spec.epsilon = eps;
    spec.inner = AttackSpec::Inner::pgd;
    const double closed = linear_model_attack(th, x, y, eps).loss;
    CHECK(corner_oracle_attack(m, th, x, y, eps).loss == doctest::Approx(closed).epsilon(1e-12));
    CHECK(pgd_attack(m, th, x, y, spec).loss == doctest::Approx(closed).epsilon(1e-10));
    CHECK(oracle::linear_corner_max(th, x, y, eps) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("corner oracle edge cases") {
  const LinearModel m(1);
  CHECK(corner_oracle_attack(m, vec({2}), vec({1}), 0, 0).delta.isZero(0));
  const auto r = corner_oracle_attack(m, vec({2}), vec({1}), 0, 0.5);
  CHECK(r.loss == doctest::Approx(std::max(std::pow(2 * 1.5, 2), std::pow(2 * 0.5, 2))));
  const LinearModel big(13);
  CHECK_THROWS_AS(corner_oracle_attack(big, Vector::Ones(13), Vector::Ones(13), 0, 0.1), RefusalError);
}

TEST_CASE("PGD: feasibility, one-step floor, sampled lower oracle") {
  const ShallowQuadNet m(3, {1.0, -0.5}, 0.1);
  SeededStream rng(4);
  for (double p : {2.0, kInf, 3.0}) {
    for (int t = 0; t < 20; ++t) {
      const Vector th = rng.normal_vector(6), x = rng.normal_vector(3);
      const double y = rng.normal();
      AttackSpec spec;
      spec.p = NormOrder::of(p);
      spec.epsilon = 0.05;
      spec.inner = AttackSpec::Inner::pgd;
      const auto r = pgd_attack(m, th, x, y, spec);
      CHECK(spec.p.norm(r.delta) <= spec.epsilon + kBallSlack);
      const Vector g = *m.derivatives(th, x, y, DerivativeKind::grad_x).grad_x;
      const double one_step = m.loss(th, x + spec.epsilon * holder_direction(g, spec.p), y);
      CHECK(r.loss >= one_step - 1e-15);
      if (std::isinf(p)) {
        const double sampled = oracle::sampled_box_max(
            [&](const Vector& d) { return m.loss(th, x + d, y); }, 3, 0.05, 100, 1000 + t);
        // first-order PGD on a small ball is near-exact; allow a sliver
        CHECK(r.loss >= sampled - 1e-6 * std::max(1.0, sampled));
      }
    }
  }
  AttackSpec zero;
  CHECK(pgd_attack(m, Vector::Ones(6), Vector::Ones(3), 1, zero).delta.isZero(0));
}

TEST_CASE("PGD flags a vanishing input gradient") {
  const ShallowQuadNet m(2, {1.0}, 0.1);
  AttackSpec spec;
  spec.epsilon = 0.1;
  const auto r = pgd_attack(m, vec({1, 0}), vec({0, 0}), 0, spec);
  CHECK(r.degenerate);
  CHECK(r.delta.isZero(0));
}

TEST_CASE("exact quadnet attack dominates sampling in the box and the ball") {
  const ShallowQuadNet m(3, {1.0, 0.5}, 0.1);
  SeededStream rng(31);
  for (int t = 0; t < 30; ++t) {
    const Vector th = rng.normal_vector(6), x = rng.normal_vector(3);
    const double y = 2 * rng.normal();
    const auto loss = [&](const Vector& d) { return m.loss(th, x + d, y); };
    AttackSpec box;
    box.epsilon = 0.3;
    const auto rb = best_attack(m, th, x, y, box);
    CHECK(rb.delta.cwiseAbs().maxCoeff() <= 0.3 + kBallSlack);
    CHECK(rb.loss >= oracle::sampled_box_max(loss, 3, 0.3, 3000, t) - 1e-12);
    AttackSpec pgd = box;
    pgd.inner = AttackSpec::Inner::pgd;
    CHECK(rb.loss >= best_attack(m, th, x, y, pgd).loss - 1e-12);
    AttackSpec ball = box;
    ball.p = NormOrder::two();
    const auto r2 = best_attack(m, th, x, y, ball);
    CHECK(r2.delta.norm() <= 0.3 + kBallSlack);
    CHECK(r2.loss >= oracle::sampled_ball_max(loss, 3, 0.3, 3000, t) - 1e-12);
  }
}

TEST_CASE("quadratic extrema over the ball, including the hard case") {
  SeededStream rng(12);
  for (int t = 0; t < 30; ++t) {
    Matrix A = rng.normal_matrix(3, 3);
    A = 0.5 * (A + A.transpose()).eval();
    const Vector b = rng.normal_vector(3);
    const auto q = [&](const Vector& d) { return d.dot(A * d) + 2 * b.dot(d); };
    const auto r = minimize_quadratic_ball(A, b, 0.7);
    CHECK(r.delta.norm() <= 0.7 + 1e-9);
    CHECK(r.value == doctest::Approx(q(r.delta)).epsilon(1e-12));
    const double sampled = -oracle::sampled_ball_max([&](const Vector& d) { return -q(d); }, 3, 0.7, 5000, t);
    CHECK(r.value <= sampled + 1e-12);
  }
  // hard case: b orthogonal to the bottom eigenvector
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = -1;
  A(1, 1) = 1;
  const auto r = minimize_quadratic_ball(A, vec({0, 0.1}), 1.0);
  // minimizer has delta_2 = -0.1/2 and |delta| = 1 along e1
  CHECK(r.value == doctest::Approx(-1 - 0.1 * 0.1 / 2).epsilon(1e-10));
  CHECK(r.delta.norm() == doctest::Approx(1));
}

TEST_CASE("box enumeration matches a dense grid and refuses large dimension") {
  SeededStream rng(13);
  for (int t = 0; t < 20; ++t) {
    Matrix A = rng.normal_matrix(2, 2);
    A = 0.5 * (A + A.transpose()).eval();
    const Vector b = rng.normal_vector(2);
    const auto q = [&](const Vector& d) { return d.dot(A * d) + 2 * b.dot(d); };
    const auto r = minimize_quadratic_box(A, b, 0.5);
    const auto [arg, val] = oracle::grid_min_2d(q, -0.5, 0.5, 1e-3);
    CHECK(r.value <= val + 1e-12);
    CHECK(r.value >= val - 1e-5);
    CHECK(box_stationary_points(A, b, 0.5).size() >= 4);
  }
  CHECK_THROWS_AS(box_stationary_points(Matrix::Identity(9, 9), Vector::Zero(9), 1.0), RefusalError);
}

TEST_CASE("batch adversarial loss: closed form, ordering, monotonicity") {
  SeededStream rng(17);
  const LinearModel lin(4);
  const Matrix X = rng.normal_matrix(12, 4);
  const Vector Y = rng.normal_vector(12);
  const LabeledDataset data(X, Y);
  const Vector th = rng.normal_vector(4);
  AttackSpec spec;
  spec.epsilon = 0.2;
  double direct = 0;
  for (Index i = 0; i < 12; ++i) {
    const double v = std::abs(Y(i) - X.row(i).dot(th)) + 0.2 * th.lpNorm<1>();
    direct += v * v / 12;
  }
  CHECK(adversarial_batch_loss(lin, th, data, spec) == doctest::Approx(direct).epsilon(1e-13));
  AttackSpec none;
  CHECK(adversarial_batch_loss(lin, th, data, none) == batch_loss(lin, th, data));

  const ShallowQuadNet quad(4, {1.0, 0.5}, 0.1);
  for (int t = 0; t < 10; ++t) {
    const Vector w = rng.normal_vector(8);
    double prev = batch_loss(quad, w, data);
    for (double e : {0.01, 0.05, 0.1, 0.2}) {
      for (auto inner : {AttackSpec::Inner::automatic, AttackSpec::Inner::pgd}) {
        AttackSpec s;
        s.epsilon = e;
        s.inner = inner;
        CHECK(adversarial_batch_loss(quad, w, data, s) >= batch_loss(quad, w, data));
      }
      AttackSpec s;
      s.epsilon = e;
      const double v = adversarial_batch_loss(quad, w, data, s);
      CHECK(v >= prev - 1e-8);
      prev = v;
    }
  }
}

TEST_CASE("attack spec validation and parsing") {
  AttackSpec s;
  s.epsilon = -1;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s.epsilon = 0.1;
  s.pgd_steps = 0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s.pgd_steps = 20;
  CHECK(s.step_size() == doctest::Approx(2.5 * 0.1 / 20));
  s.pgd_step_size = 0.0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  CHECK(parse_inner_solver("pgd") == AttackSpec::Inner::pgd);
  CHECK(parse_inner_solver(to_string(AttackSpec::Inner::automatic)) == AttackSpec::Inner::automatic);
  CHECK_THROWS_AS(parse_inner_solver("exact"), ArgumentError);
}
