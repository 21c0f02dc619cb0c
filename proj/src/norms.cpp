#include "robtrade/norms.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "robtrade/errors.hpp"
#include "robtrade/io.hpp"

namespace robtrade {

NormOrder NormOrder::infinity() { return NormOrder(std::numeric_limits<double>::infinity()); }

NormOrder NormOrder::of(double p) {
  if (std::isnan(p) || p <= 1.0) {
    throw ArgumentError("norm order must satisfy p > 1, got " + std::to_string(p));
  }
  return NormOrder(p);
}

NormOrder NormOrder::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  double p = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("cannot parse norm order '" + std::string(text) + "'");
  }
  return of(p);
}

bool NormOrder::is_infinity() const noexcept { return std::isinf(p_); }

double NormOrder::dual() const noexcept {
  if (is_infinity()) return 1.0;
  return p_ / (p_ - 1.0);
}

double NormOrder::norm(const Vector& v) const { return lp_norm(v, p_); }

double NormOrder::dual_norm(const Vector& v) const { return lp_norm(v, dual()); }

std::string NormOrder::to_string() const {
  if (is_infinity()) return "inf";
  return format_double(p_);
}

double lp_norm(const Vector& v, double r) {
  if (v.size() == 0) return 0.0;
  const double scale = v.cwiseAbs().maxCoeff();
  if (std::isinf(r)) return scale;
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  if (r == 1.0) return v.cwiseAbs().sum();
  if (r == 2.0) return v.stableNorm();
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)) / scale, r);
  return scale * std::pow(acc, 1.0 / r);
}

}  // namespace robtrade
