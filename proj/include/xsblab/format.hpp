#pragma once

#include <string>

namespace xsb {

/// printf "%.17g": round-trip exact, used for every CSV/JSON number.
std::string format_g17(double x);

/// Shortest "%.{p}g" (p <= 17) that parses back to the same double.
std::string format_short(double x);

}  // namespace xsb
