#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace auglag {

// Extended real number. Infinities are stored as IEEE infinities; any
// magnitude at or above kHuge is folded into the matching infinity.
class ExtReal {
 public:
  static constexpr double kHuge = 1e300;

  constexpr ExtReal() = default;
  ExtReal(double v) : v_(normalize(v)) {}  // NOLINT(implicit)

  static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
  static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
  bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }
  bool is_nan() const { return std::isnan(v_); }

  double value() const { return v_; }
  explicit operator double() const { return v_; }

  std::string str() const;

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

 private:
  static double normalize(double v) {
    if (v >= kHuge) return std::numeric_limits<double>::infinity();
    if (v <= -kHuge) return -std::numeric_limits<double>::infinity();
    return v;
  }
  double v_ = 0.0;
};

// Sum with the separable-composition rule: -inf absorbs everything,
// including +inf.
ExtReal ext_add(ExtReal a, ExtReal b);

// Parses "inf", "+inf", "-inf" or a decimal number.
ExtReal parse_ext_real(const std::string& s);

}  // namespace auglag
