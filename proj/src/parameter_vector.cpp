#include "robtrade/parameter_vector.hpp"

#include <cmath>
#include <string>

#include "robtrade/errors.hpp"

namespace robtrade {

Index ParameterBlock::size() const {
  Index s = 1;
  for (Index e : shape) s *= e;
  return s;
}

void validate_layout(const ParameterLayout& layout, Index dim) {
  Index cursor = 0;
  for (const auto& block : layout) {
    if (block.offset != cursor || block.size() <= 0) {
      throw DimensionError("parameter block '" + block.name + "' does not continue the layout at " +
                           std::to_string(cursor));
    }
    cursor += block.size();
  }
  if (cursor != dim) {
    throw DimensionError("parameter layout covers " + std::to_string(cursor) + " of " +
                         std::to_string(dim) + " entries");
  }
}

ParameterVector::ParameterVector(Vector values, ParameterLayout layout)
    : values_(std::move(values)), layout_(std::move(layout)) {
  validate_layout(layout_, values_.size());
  if (!values_.allFinite()) throw DomainError("parameter vector has non-finite entries");
}

Vector ParameterVector::block(std::string_view name) const {
  for (const auto& b : layout_) {
    if (b.name == name) return values_.segment(b.offset, b.size());
  }
  throw ArgumentError("unknown parameter block '" + std::string(name) + "'");
}

}  // namespace robtrade
