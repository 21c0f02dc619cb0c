#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "robtrade/linalg.hpp"

namespace robtrade {

/// Seeded random stream with a fully specified algorithm so other
/// implementations can reproduce it bit-for-bit:
///   * engine: std::mt19937_64 seeded with the 64-bit seed;
///   * uniform(): (next() >> 11) * 2^-53, in [0, 1);
///   * normal(): Box-Muller, u1 = 1 - uniform(), u2 = uniform(),
///     returns sqrt(-2 ln u1) * cos(2 pi u2); one draw pair per value;
///   * sign(): uniform() < 0.5 ? +1 : -1;
///   * below(n): floor(uniform() * n).
class SeededStream {
 public:
  static constexpr std::string_view kGeneratorId = "mt19937_64+boxmuller/v1";

  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  double sign() { return uniform() < 0.5 ? 1.0 : -1.0; }
  std::uint64_t below(std::uint64_t n);

  Vector normal_vector(Index size);
  Matrix normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
};

}  // namespace robtrade
