#include "robtrade/dataset.hpp"

#include <string>

#include "robtrade/errors.hpp"

namespace robtrade {

std::string_view to_string(DatasetRole role) {
  return role == DatasetRole::train ? "train" : "eval";
}

LabeledDataset::LabeledDataset(Matrix X, Vector Y, DatasetRole role)
    : X_(std::move(X)), Y_(std::move(Y)), role_(role) {
  if (X_.rows() < 1 || X_.cols() < 1) throw ArgumentError("dataset needs n >= 1 and m >= 1");
  if (X_.rows() != Y_.size()) {
    throw DimensionError("design has " + std::to_string(X_.rows()) + " rows but " +
                         std::to_string(Y_.size()) + " targets");
  }
  if (!X_.allFinite() || !Y_.allFinite()) throw DomainError("dataset has non-finite entries");
}

LabeledDataset LabeledDataset::with_role(DatasetRole role) const {
  LabeledDataset copy = *this;
  copy.role_ = role;
  return copy;
}

}  // namespace robtrade
