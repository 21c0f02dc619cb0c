#pragma once

#include <optional>
#include <vector>

#include "robtrade/attack.hpp"
#include "robtrade/dataset.hpp"
#include "robtrade/linalg.hpp"
#include "robtrade/models.hpp"

// Per-sample batch kernels. `serial` is the reference; `omp` distributes
// samples over OpenMP threads and writes each sample's result into its own
// slot, so both produce bit-identical outputs. Reductions are done afterwards
// in sample order by the ordered_* helpers.
namespace robtrade::kernels {

struct SampleInputs {
  const LossModel& model;
  const Vector& theta;
  const LabeledDataset& data;
  /// Optional n x m perturbations added to the inputs.
  const Matrix* deltas = nullptr;
};

/// Phi contribution of one sample: mixed * phi_i, or nullopt when grad_x = 0.
using PhiTerm = std::optional<Vector>;

/// A smooth piece of a sample's adversarial loss near theta: the loss at one
/// inner stationary point and its Danskin gradient.
struct AttackPiece {
  double value = 0.0;
  Vector grad;
};
/// Pieces whose value is within `tolerance * max(1, |best|)` of best_values(i).
using SamplePieces = std::vector<AttackPiece>;

namespace serial {
Vector losses(const SampleInputs& in);
Matrix gradients(const SampleInputs& in);  // n x d, row i = grad_theta of sample i
std::vector<Matrix> hessians(const SampleInputs& in);
std::vector<Perturbation> attacks(const LossModel& model, const Vector& theta,
                                  const LabeledDataset& data, const AttackSpec& spec);
std::vector<PhiTerm> phi_terms(const LossModel& model, const Vector& theta,
                               const LabeledDataset& data, NormOrder p, double degenerate_tol);
std::vector<SamplePieces> pieces(const LossModel& model, const Vector& theta,
                                 const LabeledDataset& data, const AttackSpec& spec,
                                 const Vector& best_values, double tolerance);
}  // namespace serial

namespace omp {
Vector losses(const SampleInputs& in);
Matrix gradients(const SampleInputs& in);
std::vector<Matrix> hessians(const SampleInputs& in);
std::vector<Perturbation> attacks(const LossModel& model, const Vector& theta,
                                  const LabeledDataset& data, const AttackSpec& spec);
std::vector<PhiTerm> phi_terms(const LossModel& model, const Vector& theta,
                               const LabeledDataset& data, NormOrder p, double degenerate_tol);
std::vector<SamplePieces> pieces(const LossModel& model, const Vector& theta,
                                 const LabeledDataset& data, const AttackSpec& spec,
                                 const Vector& best_values, double tolerance);
}  // namespace omp

double ordered_mean(const Vector& values);
/// Mean of the rows, summed in row order.
Vector ordered_row_mean(const Matrix& rows);
Matrix ordered_mean(const std::vector<Matrix>& terms);

}  // namespace robtrade::kernels
