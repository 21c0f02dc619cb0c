#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "robtrade/batch.hpp"
#include "robtrade/errors.hpp"
#include "robtrade/ifa.hpp"
#include "robtrade/models.hpp"
#include "robtrade/rng.hpp"

using namespace robtrade;

namespace {
LabeledDataset line_data(std::initializer_list<double> xs) {
  Matrix X(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) X(i++, 0) = x;
  return LabeledDataset(X, Vector::Zero(X.rows()));
}
Vector scalar(double v) { return Vector::Constant(1, v); }
}  // namespace

TEST_CASE("location model: phi, ifa and the 1-D oracle") {
  const LocationModel m(1);
  const auto data = line_data({0, 0, 3});
  const auto r = compute_ifa(m, scalar(1), data, NormOrder::infinity());
  CHECK(r.phi(0) == doctest::Approx(1.0 / 3));
  CHECK(r.ifa(0) == doctest::Approx(-1.0 / 3).epsilon(1e-14));
  CHECK(r.lambda_min == doctest::Approx(1));
  CHECK(r.damping_used == 0);
  CHECK(r.degenerate_samples.empty());
  const double eps = 1e-3;
  CHECK((oracle::location_adversarial_minimizer({0, 0, 3}, eps) - 1) / eps ==
        doctest::Approx(-1.0 / 3).epsilon(1e-6));
  // p is irrelevant in one dimension
  CHECK(compute_ifa(m, scalar(1), data, NormOrder::two()).ifa(0) == doctest::Approx(r.ifa(0)));
}

TEST_CASE("symmetric data has zero ifa; coincident samples are degenerate") {
  const LocationModel m(1);
  CHECK(compute_ifa(m, scalar(0), line_data({-1, 1}), NormOrder::infinity()).ifa(0) == 0);
  const auto r = compute_ifa(m, scalar(1), line_data({1, 0, 2}), NormOrder::infinity());
  REQUIRE(r.degenerate_samples.size() == 1);
  CHECK(r.degenerate_samples[0] == 0);
  CHECK(r.ifa(0) == 0);
  IfaOptions loose;
  loose.degenerate_tol = 0.5;
  const auto all = assemble_phi(m, scalar(1), line_data({1, 0.9, 1.1}), NormOrder::two(), loose);
  CHECK(all.degenerate_samples.size() == 3);
  CHECK(all.phi(0) == 0);
}

TEST_CASE("non-stationary anchor is rejected") {
  const LocationModel m(1);
  CHECK_THROWS_AS(compute_ifa(m, scalar(5), line_data({0, 0, 3}), NormOrder::infinity()),
                  StationarityError);
  IfaOptions opts;
  opts.stationarity_tol = 10;
  CHECK_NOTHROW(compute_ifa(m, scalar(5), line_data({0, 0, 3}), NormOrder::infinity(), 0, opts));
}

TEST_CASE("damped cholesky ladder") {
  CHECK(damped_cholesky(Matrix::Identity(3, 3), 0).damping == 0);
  CHECK(damped_cholesky(Matrix::Identity(3, 3), 0.5).damping == 0.5);
  // start at 1e-6 * mean |diag|, then ten-fold steps
  Matrix H = Matrix::Identity(2, 2);
  H(0, 0) = 2;
  H(1, 1) = -1e-4;
  CHECK(damped_cholesky(H, 0).damping == doctest::Approx(1.00005e-4).epsilon(1e-12));
  H(1, 1) = -10;  // top rung 6e-6 * 1e6 < 10
  CHECK_THROWS_AS(damped_cholesky(H, 0), SingularHessianError);
  const auto z = damped_cholesky(Matrix::Zero(2, 2), 0);
  CHECK(z.damping > 0);
  CHECK(z.damping < 1e-6);
  CHECK_THROWS_AS(damped_cholesky(-1e9 * Matrix::Identity(2, 2), 0), SingularHessianError);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = NAN;
  CHECK_THROWS_AS(damped_cholesky(bad, 0), SingularHessianError);
  CHECK_THROWS_AS(damped_cholesky(Matrix::Identity(2, 3), 0), DimensionError);
  CHECK_THROWS_AS(damped_cholesky(Matrix::Identity(2, 2), -1), ArgumentError);
}

TEST_CASE("exact trade-off change on the location model") {
  const LocationModel m(1);
  const auto data = line_data({0, 0, 3});
  CHECK(delta_hat_exact(m, scalar(1), scalar(1.1), data) == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(delta_hat_exact(m, scalar(1), scalar(1), data) == 0);
}

TEST_CASE("quadratic approximation matches the eigen oracle and its sandwich") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix Ht = oracle::random_spd(5, 0.2, 3, s);
    const Matrix He = oracle::random_spd(5, 0.1, 4, 100 + s);
    SeededStream rng(s);
    const Vector phi = rng.normal_vector(5);
    const auto q = delta_hat_quadratic(phi, Ht, He, 0.1);
    const auto o = oracle::quad_form(Ht, He, phi);
    CHECK(q.quad_form_value == doctest::Approx(o.value).epsilon(1e-10));
    CHECK(q.delta_hat == doctest::Approx(0.5 * o.value * 0.01).epsilon(1e-10));
    REQUIRE(q.bounds_valid);
    CHECK(q.lower_bound == doctest::Approx(o.lower).epsilon(1e-10));
    CHECK(q.upper_bound == doctest::Approx(o.upper).epsilon(1e-10));
    CHECK(q.lower_bound <= q.quad_form_value * (1 + 1e-12));
    CHECK(q.quad_form_value <= q.upper_bound * (1 + 1e-12));
  }
  Matrix indefinite = Matrix::Identity(2, 2);
  indefinite(1, 1) = -1;
  CHECK_THROWS_AS(delta_hat_quadratic(Vector::Ones(2), indefinite, Matrix::Identity(2, 2), 0.1),
                  SingularHessianError);
  CHECK_FALSE(delta_hat_quadratic(Vector::Ones(2), Matrix::Identity(2, 2), indefinite, 0.1)
                  .bounds_valid);
  CHECK_THROWS_AS(delta_hat_quadratic(Vector::Ones(3), Matrix::Identity(2, 2),
                                      Matrix::Identity(2, 2), 0.1),
                  DimensionError);
}

TEST_CASE("quadratic surrogate reproduces a quadratic loss and the Newton step") {
  SeededStream rng(8);
  auto lin = std::make_shared<LinearModel>(3);
  const LabeledDataset data(rng.normal_matrix(20, 3), rng.normal_vector(20));
  const Vector anchor = rng.normal_vector(3);
  const auto s = surrogate_quadratic(lin, anchor, data, 0);
  CHECK(s->damping() == 0);
  CHECK(s->initial_parameters(0) == anchor);
  for (int t = 0; t < 5; ++t) {
    const Vector th = rng.normal_vector(3);
    CHECK(batch_loss(*s, th, data) == doctest::Approx(batch_loss(*lin, th, data)).epsilon(1e-12));
    CHECK(oracle::rel_err(batch_gradient(*s, th, data), batch_gradient(*lin, th, data)) < 1e-12);
  }
  const Vector newton = anchor - batch_hessian(*lin, anchor, data)
                                     .llt()
                                     .solve(batch_gradient(*lin, anchor, data));
  CHECK(oracle::rel_err(s->minimizer(), newton) < 1e-12);
  CHECK(batch_gradient(*lin, s->minimizer(), data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("surrogate derivatives against finite differences") {
  SeededStream rng(3);
  auto q = std::make_shared<ShallowQuadNet>(3, std::vector<double>{1.0, 0.5}, 0.1);
  const LabeledDataset data(rng.normal_matrix(10, 3), rng.normal_vector(10));
  const auto s = surrogate_quadratic(q, rng.normal_vector(6), data, 0.3);
  CHECK(s->damping() >= 0.3);
  const Vector th = rng.normal_vector(6), x = rng.normal_vector(3);
  const double y = 0.4;
  const auto d = s->derivatives(th, x, y, DerivativeSet::all());
  const Vector gt = oracle::fd5_gradient([&](const Vector& v) { return s->loss(v, x, y); }, th);
  const Vector gx = oracle::fd5_gradient([&](const Vector& v) { return s->loss(th, v, y); }, x);
  CHECK(oracle::rel_err(*d.grad_theta, gt) < 1e-7);
  CHECK(oracle::rel_err(*d.grad_x, gx) < 1e-7);
  CHECK(oracle::rel_err(*d.hessian_theta, s->curvature()) == 0);
}
