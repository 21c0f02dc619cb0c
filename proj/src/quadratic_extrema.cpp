#include "robtrade/quadratic_extrema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robtrade/errors.hpp"

namespace robtrade {

namespace {

double quad_value(const Matrix& A, const Vector& b, const Vector& d) {
  return d.dot(A * d) + 2.0 * b.dot(d);
}

void check_inputs(const Matrix& A, const Vector& b, double radius) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw DimensionError("quadratic shapes differ");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ArgumentError("radius must be >= 0");
}

}  // namespace

QuadraticExtremum minimize_quadratic_ball(const Matrix& A, const Vector& b, double radius) {
  check_inputs(A, b, radius);
  const Index m = b.size();
  if (radius == 0.0 || m == 0) return {Vector::Zero(m), 0.0};

  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  const Vector lam = es.eigenvalues();  // ascending
  const Matrix& Q = es.eigenvectors();
  const Vector beta = Q.transpose() * b;
  const double scale = std::max({1.0, lam.cwiseAbs().maxCoeff(), b.norm()});
  const double tol = 1e-13 * scale;
  const double l1 = lam(0);

  const auto step = [&](double mu, bool skip_bottom) {
    Vector c(m);
    for (Index k = 0; k < m; ++k) {
      const double den = lam(k) + mu;
      c(k) = (skip_bottom && lam(k) - l1 <= tol) ? 0.0 : -beta(k) / den;
    }
    return c;
  };

  // Interior minimizer when A is positive definite and the Newton point fits.
  if (l1 > tol) {
    const Vector c = step(0.0, false);
    if (c.norm() <= radius) {
      const Vector d = Q * c;
      return {d, quad_value(A, b, d)};
    }
  }

  const double mu_lo = std::max(0.0, -l1);
  bool bottom_free = true;  // b has no component along the bottom eigenspace
  for (Index k = 0; k < m; ++k) {
    if (lam(k) - l1 <= tol && std::abs(beta(k)) > 1e-12 * std::max(1.0, b.norm())) bottom_free = false;
  }
  if (bottom_free) {
    const Vector c = step(mu_lo, true);
    if (c.norm() <= radius) {
      // Hard case: complete to the boundary along the bottom eigenvector.
      Vector full = c;
      full(0) += std::sqrt(std::max(0.0, radius * radius - c.squaredNorm()));
      const Vector d = Q * full;
      return {d, quad_value(A, b, d)};
    }
  }

  // ||c(mu)|| decreases on (mu_lo, inf); bisect for ||c|| = radius.
  double lo = mu_lo, hi = mu_lo + b.norm() / radius + std::abs(l1) + 1.0;
  while (step(hi, false).norm() > radius) hi *= 2.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double nrm = (mid + l1 > 0.0) ? step(mid, false).norm() : std::numeric_limits<double>::infinity();
    (nrm > radius ? lo : hi) = mid;
  }
  Vector c = step(hi, false);
  const double nrm = c.norm();
  if (nrm > 0.0) c *= radius / nrm;
  const Vector d = Q * c;
  return {d, quad_value(A, b, d)};
}

std::vector<QuadraticExtremum> box_stationary_points(const Matrix& A, const Vector& b,
                                                     double radius) {
  check_inputs(A, b, radius);
  const Index m = b.size();
  if (m > kBoxEnumerationMaxDim) {
    throw RefusalError("box enumeration refuses m = " + std::to_string(m));
  }
  std::vector<QuadraticExtremum> out;
  if (radius == 0.0 || m == 0) {
    out.push_back({Vector::Zero(m), 0.0});
    return out;
  }

  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  long faces = 1;
  for (Index k = 0; k < m; ++k) faces *= 3;

  std::vector<int> state(static_cast<std::size_t>(m));
  std::vector<Index> free_idx;
  Vector d(m);
  for (long f = 0; f < faces; ++f) {
    long code = f;
    free_idx.clear();
    for (Index k = 0; k < m; ++k) {
      const int s = static_cast<int>(code % 3) - 1;  // -1, 0 (free), +1
      state[static_cast<std::size_t>(k)] = s;
      code /= 3;
      if (s == 0) free_idx.push_back(k);
      else d(k) = s * radius;
    }
    const Index u = static_cast<Index>(free_idx.size());
    if (u > 0) {
      Matrix Auu(u, u);
      Vector rhs(u);
      for (Index i = 0; i < u; ++i) {
        const Index ri = free_idx[static_cast<std::size_t>(i)];
        rhs(i) = -b(ri);
        for (Index k = 0; k < m; ++k) {
          if (state[static_cast<std::size_t>(k)] != 0) rhs(i) -= A(ri, k) * d(k);
        }
        for (Index j = 0; j < u; ++j) Auu(i, j) = A(ri, free_idx[static_cast<std::size_t>(j)]);
      }
      Eigen::LDLT<Matrix> ldlt(Auu);
      if (ldlt.info() != Eigen::Success ||
          ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-12 * scale) {
        continue;
      }
      const Vector sol = ldlt.solve(rhs);
      bool feasible = sol.allFinite();
      for (Index i = 0; feasible && i < u; ++i) feasible = std::abs(sol(i)) <= radius * (1.0 + 1e-12);
      if (!feasible) continue;
      for (Index i = 0; i < u; ++i) {
        d(free_idx[static_cast<std::size_t>(i)]) = std::clamp(sol(i), -radius, radius);
      }
    }
    out.push_back({d, quad_value(A, b, d)});
  }
  return out;
}

QuadraticExtremum minimize_quadratic_box(const Matrix& A, const Vector& b, double radius) {
  const auto points = box_stationary_points(A, b, radius);
  std::size_t best = 0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].value < points[best].value) best = k;
  }
  return points[best];
}

}  // namespace robtrade
