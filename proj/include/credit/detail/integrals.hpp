#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "../curves.hpp"
#include "../survival.hpp"
#include "numerics.hpp"

namespace credit::detail {

/// Integrals of the discounted survival density over [t0, t1].
struct PathIntegrals {
    /// int Z Q e^{-das u} du
    double survival = 0.0;
    /// int h Z Q e^{-das u} du
    double default_density = 0.0;
    /// int f Z Q e^{-das u} du
    double forward_weighted = 0.0;
};

/// Closed form per segment: Z is exponential between base nodes and Q is a
/// finite exponential sum between survival breakpoints.
inline PathIntegrals path_integrals(const BaseCurve& base, const SurvivalCurve& sc, double t0, double t1,
                                    double das = 0.0) {
    PathIntegrals out;
    if (!(t1 > t0)) return out;
    std::vector<double> cuts{t0, t1};
    for (double x : base.tenors()) {
        if (x > t0 && x < t1) cuts.push_back(x);
    }
    for (double x : sc.breakpoints()) {
        if (x > t0 && x < t1) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s];
        const double len = cuts[s + 1] - a;
        const double f = base.fwd_rate(a);
        const double za = base.df(a) * std::exp(-das * a);
        for (const auto& term : sc.local_terms(a)) {
            const double e = za * term.coeff * exp_integral(term.rate + f + das, len);
            out.survival += e;
            out.default_density += term.rate * e;
            out.forward_weighted += f * e;
        }
    }
    return out;
}

} // namespace credit::detail
