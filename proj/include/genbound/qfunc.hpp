#pragma once

#include <cmath>

namespace genbound {

/// Standard normal complementary CDF, Q(x) = P(N(0,1) > x).
/// Monotone decreasing; underflows to 0 in the far right tail.
inline double q_function(double x) {
    return 0.5 * std::erfc(x * 0.70710678118654752440084436210485);
}

}  // namespace genbound
