#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"

namespace credit {

/// Number of payments of a schedule rolled back from maturity.
inline int payment_count(double maturity, int freq) {
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw ScheduleError("maturity must be positive");
    if (freq <= 0) throw ScheduleError("payment frequency must be positive");
    return static_cast<int>(std::ceil(maturity * freq - 1e-9));
}

/// Payment times t_i = T - (N - i)/q, i = 1..N. The first period may be short.
inline std::vector<double> payment_times(double maturity, int freq) {
    const int n = payment_count(maturity, freq);
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) t[static_cast<std::size_t>(i - 1)] = maturity - static_cast<double>(n - i) / freq;
    t.back() = maturity;
    return t;
}

/// True when T*q is a whole number of periods.
inline bool on_grid(double maturity, int freq) noexcept {
    const double n = maturity * freq;
    return std::abs(n - std::round(n)) <= 1e-9 && std::round(n) >= 1.0;
}

/// Fixed-coupon bullet bond with unit face.
struct BondSpec {
    double coupon = 0.0;
    int freq = 2;
    double maturity = 1.0;
    double accrued_time = 0.0;

    void validate() const {
        if (!(coupon >= 0.0) || !std::isfinite(coupon)) throw DomainError("bond coupon must be >= 0");
        if (freq != 1 && freq != 2 && freq != 4) throw DomainError("bond frequency must be 1, 2 or 4");
        if (!(maturity > 0.0) || !std::isfinite(maturity)) throw DomainError("bond maturity must be > 0");
        if (!(accrued_time >= 0.0) || accrued_time >= 1.0 / freq) {
            throw DomainError("accrued time must lie in [0, 1/q)");
        }
    }

    [[nodiscard]] double accrued_interest() const noexcept { return coupon * accrued_time; }
    [[nodiscard]] double coupon_payment() const noexcept { return coupon / freq; }
    [[nodiscard]] std::vector<double> schedule() const {
        validate();
        return payment_times(maturity, freq);
    }
};

} // namespace credit
