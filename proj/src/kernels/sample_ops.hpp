#pragma once

#include "robtrade/kernels.hpp"

// Work for a single sample, shared by the serial and OpenMP kernels.
namespace robtrade::kernels::detail {

Vector input_at(const SampleInputs& in, Index i);
double sample_loss(const SampleInputs& in, Index i);
Vector sample_gradient(const SampleInputs& in, Index i);
Matrix sample_hessian(const SampleInputs& in, Index i);
Perturbation sample_attack(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                           const AttackSpec& spec, Index i);
SamplePieces sample_pieces(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                           const AttackSpec& spec, double best_value, double tolerance, Index i);
PhiTerm sample_phi_term(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                        NormOrder p, double degenerate_tol, Index i);

}  // namespace robtrade::kernels::detail

#include <exception>

namespace robtrade::kernels::detail {

/// Runs body(i) for i in [0, n) on OpenMP threads. An exception from any
/// iteration is rethrown after the loop; the lowest failing index wins so the
/// reported error does not depend on scheduling.
template <class Body>
void omp_for(Index n, Body&& body) {
  std::exception_ptr error;
  Index error_index = n;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(robtrade_kernel_error)
      {
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

template <class Body>
void serial_for(Index n, Body&& body) {
  for (Index i = 0; i < n; ++i) body(i);
}

}  // namespace robtrade::kernels::detail
