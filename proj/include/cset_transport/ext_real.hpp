#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cst {

/// Absolute tolerance used for comparisons of distances, masses and
/// stochastic rows throughout the library.
inline constexpr double kTolerance = 1e-9;

/// A value in the extended nonnegative reals [0, inf].
///
/// Arithmetic follows the measure-theoretic conventions: x + inf = inf and
/// 0 * inf = 0.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  // NOLINTNEXTLINE(google-explicit-constructor)
  ExtReal(double value) : value_(value) {
    if (std::isnan(value) || value < 0.0) {
      throw std::invalid_argument("ExtReal requires a nonnegative value, got " + std::to_string(value));
    }
  }

  static constexpr ExtReal infinity() { return ExtReal(Raw{}, std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal zero() { return ExtReal(); }

  /// Clamps round-off negatives (e.g. LP objective values) to zero.
  static ExtReal clamped(double value) { return ExtReal(value < 0.0 ? 0.0 : value); }

  constexpr double value() const { return value_; }
  constexpr bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_infinite(); }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(Raw{}, a.value_ + b.value_); }
  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.value_ == 0.0 || b.value_ == 0.0) return ExtReal();
    return ExtReal(Raw{}, a.value_ * b.value_);
  }
  ExtReal& operator+=(ExtReal other) { return *this = *this + other; }

  /// x^p for finite p >= 1; inf^p = inf.
  ExtReal pow(double p) const { return is_infinite() ? *this : ExtReal(Raw{}, std::pow(value_, p)); }
  /// x^(1/p); inf stays inf.
  ExtReal root(double p) const {
    if (is_infinite() || p == 1.0) return *this;
    return ExtReal(Raw{}, std::pow(value_, 1.0 / p));
  }

  friend constexpr auto operator<=>(ExtReal a, ExtReal b) { return a.value_ <=> b.value_; }
  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }

  /// a <= b up to the absolute tolerance; inf <= inf holds.
  friend bool le_tol(ExtReal a, ExtReal b, double tol = kTolerance) {
    if (b.is_infinite()) return true;
    if (a.is_infinite()) return false;
    return a.value_ <= b.value_ + tol;
  }

  std::string to_string() const;

  friend std::ostream& operator<<(std::ostream& os, ExtReal x) { return os << x.to_string(); }

 private:
  struct Raw {};
  constexpr ExtReal(Raw, double value) : value_(value) {}

  double value_ = 0.0;
};

inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }
inline ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }

/// The l^p norm of a finite family: (sum w^p)^(1/p), or the maximum when p
/// is infinite. An empty family has norm 0.
template <typename Range>
ExtReal lp_aggregate(const Range& weights, double p) {
  ExtReal total;
  for (ExtReal w : weights) total = std::isinf(p) ? max(total, w) : total + w.pow(p);
  return std::isinf(p) ? total : total.root(p);
}

inline bool is_infinite_order(double p) { return std::isinf(p); }

}  // namespace cst
