#pragma once

#include <string>

#include "incdual/ext_real.hpp"

namespace incdual {

/// Shortest round-trip decimal form; "inf" / "-inf" for infinities.
std::string format_double(double v);

}  // namespace incdual
