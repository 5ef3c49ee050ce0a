#include "auglag/ext_real.hpp"

#include <cstdio>
#include <stdexcept>

namespace auglag {

ExtReal ext_add(ExtReal a, ExtReal b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(a.value() + b.value());
}

std::string ExtReal::str() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  if (is_nan()) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v_);
  return buf;
}

ExtReal parse_ext_real(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "Infinity") return ExtReal::pos_inf();
  if (s == "-inf" || s == "-Infinity") return ExtReal::neg_inf();
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
  return ExtReal(v);
}

}  // namespace auglag
