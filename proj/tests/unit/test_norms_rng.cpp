#include <doctest.h>

#include <cmath>
#include <random>

#include "robtrade/errors.hpp"
#include "robtrade/norms.hpp"
#include "robtrade/parameter_vector.hpp"
#include "robtrade/rng.hpp"

using namespace robtrade;

TEST_CASE("norm orders parse and report their conjugates") {
  CHECK(NormOrder::parse("2").is_two());
  CHECK(NormOrder::parse("inf").is_infinity());
  CHECK(NormOrder::parse("infinity").is_infinity());
  CHECK(NormOrder::parse("3").dual() == doctest::Approx(1.5));
  CHECK(NormOrder::infinity().dual() == 1.0);
  CHECK(NormOrder::two().dual() == 2.0);
  CHECK_THROWS_AS(NormOrder::parse("1"), ArgumentError);
  CHECK_THROWS_AS(NormOrder::parse("0.5"), ArgumentError);
  CHECK_THROWS_AS(NormOrder::parse("abc"), ArgumentError);
  CHECK(NormOrder::parse(NormOrder::of(3.0).to_string()) == NormOrder::of(3.0));
}

TEST_CASE("lp norms") {
  Vector v(2);
  v << 3, -4;
  CHECK(lp_norm(v, 1) == 7);
  CHECK(lp_norm(v, 2) == doctest::Approx(5));
  CHECK(lp_norm(v, INFINITY) == 4);
  CHECK(NormOrder::of(3).norm(v) == doctest::Approx(std::cbrt(27.0 + 64.0)));
  CHECK(NormOrder::infinity().dual_norm(v) == 7);
  CHECK(lp_norm(Vector::Zero(3), 2) == 0);
  // no overflow for huge entries
  Vector big = Vector::Constant(2, 1e200);
  CHECK(std::isfinite(lp_norm(big, 2)));
  CHECK(lp_norm(big, 2) == doctest::Approx(std::sqrt(2.0) * 1e200));
}

TEST_CASE("seeded stream follows its documented recipe") {
  SeededStream s(42);
  std::mt19937_64 ref(42);
  for (int i = 0; i < 5; ++i) {
    const double expected = static_cast<double>(ref() >> 11) * 0x1.0p-53;
    CHECK(s.uniform() == expected);
  }
  // normal: one pair of uniforms per value
  SeededStream a(7);
  std::mt19937_64 r(7);
  const double u1 = 1.0 - static_cast<double>(r() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(r() >> 11) * 0x1.0p-53;
  CHECK(a.normal() == std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2));
  CHECK(SeededStream::kGeneratorId == "mt19937_64+boxmuller/v1");
}

TEST_CASE("seeded stream is deterministic and well spread") {
  SeededStream a(3), b(3);
  CHECK(a.normal_matrix(4, 5) == b.normal_matrix(4, 5));
  SeededStream s(11);
  double mean = 0, sq = 0;
  const int n = 20000;
  int pos = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    mean += z;
    sq += z * z;
    const auto k = s.below(7);
    CHECK(k < 7);
    pos += s.sign() > 0 ? 1 : 0;
  }
  CHECK(std::abs(mean / n) < 0.03);
  CHECK(std::abs(sq / n - 1) < 0.05);
  CHECK(std::abs(pos / double(n) - 0.5) < 0.02);
}

TEST_CASE("parameter layouts must tile the vector") {
  ParameterLayout ok = {{"a", 0, {2}}, {"b", 2, {1}}};
  ParameterVector p(Vector::LinSpaced(3, 1, 3), ok);
  CHECK(p.block("b")(0) == 3);
  CHECK(p.block("a").size() == 2);
  CHECK_THROWS_AS(p.block("zz"), ArgumentError);
  ParameterLayout gap = {{"a", 0, {2}}, {"b", 3, {1}}};
  CHECK_THROWS_AS(ParameterVector(Vector::Zero(4), gap), DimensionError);
  CHECK_THROWS_AS(ParameterVector(Vector::Zero(4), ok), DimensionError);
}
