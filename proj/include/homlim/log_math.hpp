#pragma once

// Helpers for quantities carried as natural logarithms. Zero is -inf.

#include <algorithm>
#include <cmath>
#include <limits>

namespace homlim::logm {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline double log_or_neg_inf(double x) { return x > 0.0 ? std::log(x) : neg_inf; }

/// log(exp(a) + exp(b))
inline double add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// log(max(exp(a) - exp(b), 0))
inline double sub_clamped(double a, double b) {
    if (b == neg_inf) return a;
    if (b >= a) return neg_inf;
    return a + std::log1p(-std::exp(b - a));
}

inline double add3(double a, double b, double c) { return add(add(a, b), c); }

}  // namespace homlim::logm
