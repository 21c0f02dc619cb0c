#pragma once

#include <string_view>

#include "robtrade/linalg.hpp"

namespace robtrade {

enum class DatasetRole { train, eval };

std::string_view to_string(DatasetRole role);

/// Design matrix X (rows are samples) with targets Y.
class LabeledDataset {
 public:
  /// Throws ArgumentError for empty data, DimensionError for row mismatch,
  /// DomainError for non-finite entries.
  LabeledDataset(Matrix X, Vector Y, DatasetRole role = DatasetRole::train);

  Index size() const noexcept { return X_.rows(); }
  Index input_dim() const noexcept { return X_.cols(); }
  const Matrix& X() const noexcept { return X_; }
  const Vector& Y() const noexcept { return Y_; }
  Vector x(Index i) const { return X_.row(i).transpose(); }
  double y(Index i) const { return Y_(i); }
  DatasetRole role() const noexcept { return role_; }

  LabeledDataset with_role(DatasetRole role) const;

 private:
  Matrix X_;
  Vector Y_;
  DatasetRole role_;
};

}  // namespace robtrade
