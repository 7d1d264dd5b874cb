#include "linkxplore/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lx {

namespace {

Real pow10_table(unsigned decimals) {
    // dec <= 18 by contract; 10^k for k <= 18 is exact in long double.
    static const Real table[] = {
        1.0L,    1e1L,  1e2L,  1e3L,  1e4L,  1e5L,  1e6L,  1e7L,  1e8L,  1e9L,
        1e10L,   1e11L, 1e12L, 1e13L, 1e14L, 1e15L, 1e16L, 1e17L, 1e18L,
    };
    if (decimals > 18) throw std::invalid_argument("decimals out of range");
    return table[decimals];
}

} // namespace

Real scale_down(std::uint64_t raw, unsigned decimals) {
    return static_cast<Real>(raw) / pow10_table(decimals);
}

std::uint64_t scale_up(Real ui, unsigned decimals) {
    Real scaled = std::roundl(ui * pow10_table(decimals));
    if (scaled < 0.0L || scaled >= 18446744073709551616.0L)
        throw std::invalid_argument("amount out of u64 range");
    return static_cast<std::uint64_t>(scaled);
}

std::string format_real(Real value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15Lg", value);
    return buf;
}

Real log_median(const std::vector<Real>& values) {
    if (values.empty()) throw std::invalid_argument("log_median of empty list");
    std::vector<Real> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    const Real lo = std::log(sorted[n / 2 - 1]);
    const Real hi = std::log(sorted[n / 2]);
    return std::exp((lo + hi) / 2.0L);
}

} // namespace lx
