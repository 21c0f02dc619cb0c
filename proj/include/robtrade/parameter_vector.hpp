#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "robtrade/linalg.hpp"

namespace robtrade {

struct ParameterBlock {
  std::string name;
  Index offset = 0;
  std::vector<Index> shape;

  Index size() const;
};

using ParameterLayout = std::vector<ParameterBlock>;

/// Throws DimensionError unless the blocks tile [0, dim) exactly, in order.
void validate_layout(const ParameterLayout& layout, Index dim);

/// Flattened model parameters with a named block layout.
class ParameterVector {
 public:
  ParameterVector() = default;
  ParameterVector(Vector values, ParameterLayout layout);

  const Vector& values() const noexcept { return values_; }
  const ParameterLayout& layout() const noexcept { return layout_; }
  Index size() const noexcept { return values_.size(); }

  /// Copy of the named block; throws ArgumentError for unknown names.
  Vector block(std::string_view name) const;

 private:
  Vector values_;
  ParameterLayout layout_;
};

}  // namespace robtrade
