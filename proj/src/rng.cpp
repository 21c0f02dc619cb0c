#include "robtrade/rng.hpp"

#include <cmath>
#include <numbers>

namespace robtrade {

double SeededStream::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SeededStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t SeededStream::below(std::uint64_t n) {
  auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

Vector SeededStream::normal_vector(Index size) {
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = normal();
  return v;
}

Matrix SeededStream::normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal();
  }
  return m;
}

}  // namespace robtrade
