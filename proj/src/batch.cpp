#include "robtrade/batch.hpp"

#include "robtrade/errors.hpp"
#include "robtrade/kernels.hpp"

namespace robtrade {

namespace {

void check_batch(const LossModel& model, const LabeledDataset& data, const Matrix* deltas) {
  if (data.size() < 1) throw ArgumentError("empty dataset");
  if (data.input_dim() != model.input_dim()) {
    throw DimensionError(model.name() + ": dataset has " + std::to_string(data.input_dim()) +
                         " input columns, expected " + std::to_string(model.input_dim()));
  }
  if (deltas != nullptr &&
      (deltas->rows() != data.size() || deltas->cols() != data.input_dim())) {
    throw DimensionError("perturbation matrix shape does not match the dataset");
  }
}

double loss_impl(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                 const Matrix* deltas, Execution exec) {
  check_batch(model, data, deltas);
  const kernels::SampleInputs in{model, theta, data, deltas};
  const Vector per_sample =
      exec == Execution::serial ? kernels::serial::losses(in) : kernels::omp::losses(in);
  return kernels::ordered_mean(per_sample) + model.regularizer(theta);
}

Vector gradient_impl(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                     const Matrix* deltas, Execution exec) {
  check_batch(model, data, deltas);
  const kernels::SampleInputs in{model, theta, data, deltas};
  const Matrix per_sample =
      exec == Execution::serial ? kernels::serial::gradients(in) : kernels::omp::gradients(in);
  return kernels::ordered_row_mean(per_sample) + model.regularizer_gradient(theta);
}

Matrix hessian_impl(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                    const Matrix* deltas, Execution exec) {
  check_batch(model, data, deltas);
  const kernels::SampleInputs in{model, theta, data, deltas};
  const auto per_sample =
      exec == Execution::serial ? kernels::serial::hessians(in) : kernels::omp::hessians(in);
  return kernels::ordered_mean(per_sample) + model.regularizer_hessian(theta);
}

}  // namespace

double batch_loss(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                  Execution exec) {
  return loss_impl(model, theta, data, nullptr, exec);
}

Vector batch_gradient(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                      Execution exec) {
  return gradient_impl(model, theta, data, nullptr, exec);
}

Matrix batch_hessian(const LossModel& model, const Vector& theta, const LabeledDataset& data,
                     Execution exec) {
  return hessian_impl(model, theta, data, nullptr, exec);
}

double perturbed_batch_loss(const LossModel& model, const Vector& theta,
                            const LabeledDataset& data, const Matrix& deltas, Execution exec) {
  return loss_impl(model, theta, data, &deltas, exec);
}

Vector perturbed_batch_gradient(const LossModel& model, const Vector& theta,
                                const LabeledDataset& data, const Matrix& deltas,
                                Execution exec) {
  return gradient_impl(model, theta, data, &deltas, exec);
}

Matrix perturbed_batch_hessian(const LossModel& model, const Vector& theta,
                               const LabeledDataset& data, const Matrix& deltas,
                               Execution exec) {
  return hessian_impl(model, theta, data, &deltas, exec);
}

}  // namespace robtrade
