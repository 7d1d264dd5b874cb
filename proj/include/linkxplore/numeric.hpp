#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lx {

// Quantity/price math runs in extended precision so that any raw u64 amount
// is exactly representable (x86 long double carries a 64-bit mantissa).
using Real = long double;

// a / 10^dec without going through text. Exact inputs, correctly rounded once.
Real scale_down(std::uint64_t raw, unsigned decimals);

// Inverse of scale_down, rounded to the nearest integer.
std::uint64_t scale_up(Real ui, unsigned decimals);

// Shortest-ish decimal rendering used everywhere a price or weight leaves the
// process (JSON bodies, CSV). Deterministic for a given value.
std::string format_real(Real value);

// Median in log space: even-length lists take the mean of the two central
// values of ln(x), i.e. the geometric mean of the two central elements.
Real log_median(const std::vector<Real>& values);

} // namespace lx
