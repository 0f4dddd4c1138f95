#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace ordembed {

// Large-argument-safe elementary pieces shared by the risk evaluators and the
// tree-embedding distance engine. All functions take plain doubles; only the
// *values* cosh/sinh/exp of large inputs are kept in log form.

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

/// log(cosh x), exact for tiny and huge |x|.
inline double log_cosh(double x) {
    x = std::abs(x);
    if (x < 20.0) return std::log(std::cosh(x));
    return x + std::log1p(std::exp(-2.0 * x)) - kLn2;
}

/// log(sinh x) for x >= 0; -inf at 0.
inline double log_sinh(double x) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x < 1e-4) return std::log(x) + x * x / 6.0;  // sinh x = x(1 + x^2/6 + ...)
    if (x < 20.0) return std::log(std::sinh(x));
    return x + std::log1p(-std::exp(-2.0 * x)) - kLn2;
}

/// arcosh of e^lc given lc = log(cosh a) >= 0.
inline double acosh_from_log_cosh(double lc) {
    if (lc <= 0.0) return 0.0;
    if (lc < 25.0) return std::acosh(std::exp(lc));
    // a = lc + log(1 + sqrt(1 - e^{-2 lc}))
    return lc + std::log1p(std::sqrt(-std::expm1(-2.0 * lc)));
}

/// log(e^a + e^b) without overflow; handles -inf operands.
inline double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// Sign (+1/0/-1) and log-magnitude of h = cosh(d1) - cosh(d2)
///                                        = 2 sinh((d1+d2)/2) sinh((d1-d2)/2).
struct SignedLog {
    int sign;
    double log_abs;  // -inf when sign == 0

    /// The represented value as a double; +-inf on overflow, which callers
    /// that saturate first never hit.
    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_abs);
    }
};

inline SignedLog cosh_gap(double d1, double d2) {
    if (d1 == d2) return {0, -std::numeric_limits<double>::infinity()};
    const double s = 0.5 * (d1 + d2);
    const double t = 0.5 * std::abs(d1 - d2);
    const int sign = d1 > d2 ? +1 : -1;
    return {sign, kLn2 + log_sinh(s) + log_sinh(t)};
}

}  // namespace ordembed
