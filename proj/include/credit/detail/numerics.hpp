#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "../error.hpp"

namespace credit::detail {

/// Default bracket for spread and yield solvers.
inline constexpr double rate_bracket_lo = -0.5;
inline constexpr double rate_bracket_hi = 5.0;

/// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class F>
double bracketed_root(F&& f, double lo, double hi, const std::string& what) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi)) {
        throw ConvergenceError(what + ": objective not finite at bracket ends");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw ConvergenceError(what + ": no root in [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
    }
    std::uintmax_t iters = 300;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    if (iters >= 300) throw ConvergenceError(what + ": iteration limit reached");
    const double fa = std::abs(f(a));
    const double fb = std::abs(f(b));
    return fa <= fb ? a : b;
}

/// Integral of e^{-mu u} over [0, len].
inline double exp_integral(double mu, double len) noexcept {
    const double x = mu * len;
    if (std::abs(x) < 1e-300) return len;
    return -std::expm1(-x) / mu;
}

} // namespace credit::detail
