#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "incdual/error.hpp"

namespace incdual {

/// A real number or one of +inf / -inf. Sums of opposite infinities throw
/// instead of producing NaN.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) {}  // NOLINT: implicit from finite reals

  static constexpr ExtReal plus_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal minus_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

  constexpr double value() const { return v_; }
  bool is_finite() const { return std::isfinite(v_); }
  bool is_plus_inf() const { return std::isinf(v_) && v_ > 0; }
  bool is_minus_inf() const { return std::isinf(v_) && v_ < 0; }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if ((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf())) {
      fail(ErrorCode::kIndeterminate, "extended-real sum (+inf) + (-inf)");
    }
    return ExtReal(a.v_ + b.v_);
  }
  friend ExtReal operator-(ExtReal a) { return ExtReal(-a.v_); }
  friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }
  ExtReal& operator+=(ExtReal b) { return *this = *this + b; }
  ExtReal& operator-=(ExtReal b) { return *this = *this - b; }

  /// Multiplication by a finite scalar; 0 * (+-inf) is taken as 0 (convex
  /// analysis convention for positively homogeneous functions).
  friend ExtReal operator*(double s, ExtReal a) {
    if (s == 0.0) return ExtReal(0.0);
    return ExtReal(s * a.v_);
  }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

  std::string str() const;

 private:
  double v_ = 0.0;
};

inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }
inline ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }

}  // namespace incdual
