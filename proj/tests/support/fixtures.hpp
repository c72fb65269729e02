#pragma once

// Synthetic market fixtures shared by the tests.

#include <string>
#include <vector>

#include "credit/calibration.hpp"
#include "credit/curves.hpp"
#include "credit/measures.hpp"
#include "credit/survival.hpp"

namespace fixture {

inline credit::BaseCurve base_curve() {
    return credit::BaseCurve::from_zero_rates(
        std::vector<double>{0.5, 1, 2, 3, 5, 7, 10, 20, 30},
        std::vector<double>{0.011, 0.0115, 0.016, 0.021, 0.03, 0.036, 0.042, 0.048, 0.05});
}

inline constexpr double true_eta = 0.065;

inline credit::SurvivalCurve true_curve() {
    return credit::SurvivalCurve::spline(credit::SplineBasis(true_eta), {0.7, 0.5, -0.2}, 25.0);
}

struct BondLine {
    double coupon;
    double maturity;
    double accrued;
};

inline std::vector<BondLine> universe() {
    return {{0.045, 1.5, 0.0},  {0.05, 2.0, 0.1},   {0.0625, 3.0, 0.25}, {0.07, 3.75, 0.0},
            {0.055, 5.0, 0.4},  {0.08, 6.0, 0.0},   {0.0675, 7.0, 0.2},  {0.09, 8.5, 0.0},
            {0.06, 10.0, 0.3},  {0.0725, 12.0, 0.0}, {0.085, 15.0, 0.15}, {0.065, 20.0, 0.0}};
}

/// Quotes priced exactly off the given curve.
inline std::vector<credit::BondQuote> quotes_from(const credit::BaseCurve& base, const credit::SurvivalCurve& sc,
                                                  double recovery) {
    std::vector<credit::BondQuote> out;
    int n = 0;
    for (const auto& b : universe()) {
        credit::BondQuote q;
        q.id = "B" + std::to_string(++n);
        q.spec = credit::BondSpec{b.coupon, 2, b.maturity, b.accrued};
        q.clean_price = credit::fitted_price(q.spec, base, sc, recovery);
        out.push_back(q);
    }
    return out;
}

} // namespace fixture
