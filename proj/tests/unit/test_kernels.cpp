#include <doctest.h>

#include <memory>
#include <vector>

#include "robtrade/attack.hpp"
#include "robtrade/batch.hpp"
#include "robtrade/kernels.hpp"
#include "robtrade/models.hpp"
#include "robtrade/rng.hpp"

using namespace robtrade;
namespace ks = robtrade::kernels::serial;
namespace ko = robtrade::kernels::omp;

namespace {

struct Case {
  std::shared_ptr<LossModel> model;
  LabeledDataset data;
  Vector theta;
};

std::vector<Case> cases() {
  SeededStream rng(77);
  const Index n = 37;
  std::vector<Case> out;
  const auto add = [&](std::shared_ptr<LossModel> m) {
    Matrix X = rng.normal_matrix(n, m->input_dim());
    Vector Y = rng.normal_vector(n);
    if (m->name().find("logistic") != std::string::npos) {
      for (Index i = 0; i < n; ++i) Y(i) = rng.sign();
    }
    out.push_back({m, LabeledDataset(X, Y), rng.normal_vector(m->param_dim())});
  };
  add(std::make_shared<LinearModel>(5));
  add(std::make_shared<LocationModel>(3));
  add(std::make_shared<ShallowQuadNet>(3, std::vector<double>{1.0, 0.5}, 0.1));
  add(std::make_shared<LogisticModel>(4));
  return out;
}

}  // namespace

TEST_CASE("serial and omp kernels are bit-identical") {
  for (const auto& c : cases()) {
    CAPTURE(c.model->name());
    SeededStream rng(5);
    const Matrix deltas = 0.01 * rng.normal_matrix(c.data.size(), c.data.input_dim());
    for (const Matrix* d : {static_cast<const Matrix*>(nullptr), &deltas}) {
      const kernels::SampleInputs in{*c.model, c.theta, c.data, d};
      CHECK(ks::losses(in) == ko::losses(in));
      CHECK(ks::gradients(in) == ko::gradients(in));
      const auto hs = ks::hessians(in), ho = ko::hessians(in);
      REQUIRE(hs.size() == ho.size());
      for (std::size_t i = 0; i < hs.size(); ++i) CHECK(hs[i] == ho[i]);
    }
    for (auto p : {NormOrder::two(), NormOrder::infinity()}) {
      AttackSpec spec;
      spec.p = p;
      spec.epsilon = 0.05;
      for (auto inner : {AttackSpec::Inner::automatic, AttackSpec::Inner::pgd}) {
        spec.inner = inner;
        const auto as = ks::attacks(*c.model, c.theta, c.data, spec);
        const auto ao = ko::attacks(*c.model, c.theta, c.data, spec);
        REQUIRE(as.size() == ao.size());
        for (std::size_t i = 0; i < as.size(); ++i) {
          CHECK(as[i].delta == ao[i].delta);
          CHECK(as[i].loss == ao[i].loss);
          CHECK(as[i].degenerate == ao[i].degenerate);
        }
      }
      const auto ps = ks::phi_terms(*c.model, c.theta, c.data, p, 0.0);
      const auto po = ko::phi_terms(*c.model, c.theta, c.data, p, 0.0);
      REQUIRE(ps.size() == po.size());
      for (std::size_t i = 0; i < ps.size(); ++i) {
        REQUIRE(ps[i].has_value() == po[i].has_value());
        if (ps[i]) CHECK(*ps[i] == *po[i]);
      }
    }
  }
}

TEST_CASE("batch functions agree across execution modes") {
  for (const auto& c : cases()) {
    CAPTURE(c.model->name());
    CHECK(batch_loss(*c.model, c.theta, c.data, Execution::serial) ==
          batch_loss(*c.model, c.theta, c.data, Execution::parallel));
    CHECK(batch_gradient(*c.model, c.theta, c.data, Execution::serial) ==
          batch_gradient(*c.model, c.theta, c.data, Execution::parallel));
    CHECK(batch_hessian(*c.model, c.theta, c.data, Execution::serial) ==
          batch_hessian(*c.model, c.theta, c.data, Execution::parallel));
    AttackSpec spec;
    spec.epsilon = 0.1;
    CHECK(adversarial_batch_loss(*c.model, c.theta, c.data, spec, Execution::serial) ==
          adversarial_batch_loss(*c.model, c.theta, c.data, spec, Execution::parallel));
  }
}

TEST_CASE("ordered reductions") {
  Vector v(4);
  v << 1, 2, 3, 6;
  CHECK(kernels::ordered_mean(v) == 3.0);
  Matrix rows(2, 2);
  rows << 1, 2, 3, 4;
  CHECK(kernels::ordered_row_mean(rows) == Vector::Map(std::vector<double>{2, 3}.data(), 2));
  const std::vector<Matrix> terms{Matrix::Identity(2, 2), 3 * Matrix::Identity(2, 2)};
  CHECK(kernels::ordered_mean(terms) == 2 * Matrix::Identity(2, 2));
}

TEST_CASE("batch means match explicit per-sample sums") {
  for (const auto& c : cases()) {
    double s = 0;
    Vector g = Vector::Zero(c.model->param_dim());
    for (Index i = 0; i < c.data.size(); ++i) {
      s += c.model->loss(c.theta, c.data.x(i), c.data.y(i));
      g += *c.model->derivatives(c.theta, c.data.x(i), c.data.y(i), DerivativeKind::grad_theta)
                .grad_theta;
    }
    const double n = static_cast<double>(c.data.size());
    CHECK(batch_loss(*c.model, c.theta, c.data) ==
          doctest::Approx(s / n + c.model->regularizer(c.theta)).epsilon(1e-13));
    const Vector bg = batch_gradient(*c.model, c.theta, c.data);
    CHECK((bg - g / n - c.model->regularizer_gradient(c.theta)).cwiseAbs().maxCoeff() < 1e-12);
  }
}
