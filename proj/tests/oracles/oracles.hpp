#pragma once

// Reference computations for the test suites. Each one avoids the library
// routine it is compared against: brute force, dense grids, direct formulas
// or textbook decompositions.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "robtrade/dataset.hpp"
#include "robtrade/linalg.hpp"
#include "robtrade/models.hpp"

namespace oracle {

using robtrade::Index;
using robtrade::Matrix;
using robtrade::Vector;

// Five-point central stencil, fixed step.
Vector fd5_gradient(const std::function<double(const Vector&)>& f, const Vector& at,
                    double h = 1e-4);
Matrix fd5_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& at,
                    double h = 1e-4);

// max |a - r| / max(1, max |r|).
double rel_err(const Matrix& a, const Matrix& r);

// Quadratic network written out from its definition.
double quadnet_output(const Vector& theta, const Vector& x, const std::vector<double>& a);
double quadnet_batch_loss(const Vector& theta, const Matrix& X, const Vector& Y,
                          const std::vector<double>& a, double mu);

// Largest (y - (x + delta)^T theta)^2 over the 2^m corners of the eps box.
double linear_corner_max(const Vector& theta, const Vector& x, double y, double eps);

// Global max of a loss over the eps box for small m: all corners plus a
// dense random sample. A lower oracle for the true max.
double sampled_box_max(const std::function<double(const Vector&)>& loss, Index m, double eps,
                       int samples, std::uint64_t seed);
double sampled_ball_max(const std::function<double(const Vector&)>& loss, Index m, double eps,
                        int samples, std::uint64_t seed);

// Ternary search on a unimodal 1-D function over [lo, hi]; flat minima limit it
// to about sqrt(machine epsilon).
double argmin_1d(const std::function<double(double)>& f, double lo, double hi);

// Minimizer of (1/n) sum (|theta - x_i| + eps)^2, by bisection on the slope.
double location_adversarial_minimizer(const std::vector<double>& xs, double eps);

// Phi^T Ht^{-1} He Ht^{-1} Phi through explicit eigendecompositions.
struct QuadFormOracle {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};
QuadFormOracle quad_form(const Matrix& Ht, const Matrix& He, const Vector& phi);

// Random SPD matrix with eigenvalues in [lo, hi].
Matrix random_spd(Index d, double lo, double hi, std::uint64_t seed);

// X^+ Y by a full SVD with a relative cutoff.
Vector pinv_solve(const Matrix& X, const Vector& Y);

// LASSO (1/n)||Y - X t||^2 + lambda ||t||_1 by enumerating sign patterns of
// the support: for each candidate support and signs, solve the stationarity
// equations and keep the feasible point with the smallest objective. d <= 10.
Vector lasso_by_enumeration(const Matrix& X, const Vector& Y, double lambda);
double lasso_objective(const Matrix& X, const Vector& Y, const Vector& t, double lambda);

// Minimum of f over a square grid [lo, hi]^2 with the given step.
std::pair<Vector, double> grid_min_2d(const std::function<double(const Vector&)>& f, double lo,
                                      double hi, double step);

// Indices of points not weakly dominated, by pairwise comparison. A repeated
// point is kept at its first occurrence only.
std::vector<std::size_t> naive_pareto(const std::vector<std::pair<double, double>>& pts);

// beta on curve (alphas, betas) at alpha, by linear interpolation; clamps
// outside the covered range. Input points need not be sorted.
double interpolate_beta(const std::vector<double>& alphas, const std::vector<double>& betas,
                        double alpha);

// Quadratic-network IFA instance: k = 2, m = 3, n = 50, a = (1, 0.5), mu = 0.1,
// labels with +-0.1 sign noise. Seeds are scanned from 0 and the first one
// whose input-gradient sign pattern stays fixed along
// theta_hat + t * 0.01 * IFA, t in [0, 2], for both p = 2 and p = inf is used.
struct IfaInstance {
  robtrade::LabeledDataset data;
  std::uint64_t seed = 0;
  Vector theta_hat;
};
IfaInstance screened_quadnet_instance();
// Sign pattern of grad_x l over all samples.
std::vector<int> input_sign_pattern(const robtrade::LossModel& model, const Vector& theta,
                                    const robtrade::LabeledDataset& data);

}  // namespace oracle
