#pragma once

#include <string>
#include <string_view>

#include "robtrade/linalg.hpp"

namespace robtrade {

/// Order p of an l_p norm, p in (1, inf]. Also exposes the Hoelder conjugate q.
class NormOrder {
 public:
  static NormOrder two() { return NormOrder(2.0); }
  static NormOrder infinity();
  /// Any p > 1, including +inf.
  static NormOrder of(double p);
  /// Accepts "2", "inf", "infinity", or a decimal number > 1.
  static NormOrder parse(std::string_view text);

  double value() const noexcept { return p_; }
  bool is_infinity() const noexcept;
  bool is_two() const noexcept { return p_ == 2.0; }
  /// q with 1/p + 1/q = 1 (q = 1 for p = inf).
  double dual() const noexcept;

  double norm(const Vector& v) const;
  double dual_norm(const Vector& v) const;

  std::string to_string() const;

  friend bool operator==(const NormOrder&, const NormOrder&) = default;

 private:
  explicit NormOrder(double p) : p_(p) {}
  double p_;
};

/// l_r norm for r in [1, inf]. Scales by the sup-norm first to avoid overflow.
double lp_norm(const Vector& v, double r);

}  // namespace robtrade
