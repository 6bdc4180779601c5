#include "incdual/format.hpp"

#include <charconv>
#include <cmath>

namespace incdual {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ExtReal::str() const { return format_double(v_); }

}  // namespace incdual
