#pragma once

#include "robtrade/dataset.hpp"
#include "robtrade/execution.hpp"
#include "robtrade/linalg.hpp"
#include "robtrade/models.hpp"

namespace robtrade {

// Batch means over a dataset, including the model's batch-level regularizer.
// The perturbed variants evaluate at inputs x_i + deltas.row(i).

/// alpha-hat: mean clean loss. Throws ArgumentError on an empty dataset.
double batch_loss(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                  Execution exec = Execution::parallel);
Vector batch_gradient(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                      Execution exec = Execution::parallel);
Matrix batch_hessian(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                     Execution exec = Execution::parallel);

double perturbed_batch_loss(const LossModel& model, const Vector& theta,
                            const LabeledDataset& data, const Matrix& deltas,
                            Execution exec = Execution::parallel);
Vector perturbed_batch_gradient(const LossModel& model, const Vector& theta,
                                const LabeledDataset& data, const Matrix& deltas,
                                Execution exec = Execution::parallel);
Matrix perturbed_batch_hessian(const LossModel& model, const Vector& theta,
                               const LabeledDataset& data, const Matrix& deltas,
                               Execution exec = Execution::parallel);

}  // namespace robtrade
