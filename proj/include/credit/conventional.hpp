#pragma once

#include <cmath>
#include <vector>

#include "bond.hpp"
#include "curves.hpp"
#include "detail/numerics.hpp"
#include "error.hpp"

namespace credit {

/// Compounding frequency value meaning continuous compounding.
inline constexpr int continuous_compounding = 0;

namespace detail {

inline double yield_discount(double y, double t, int compounding) {
    if (compounding == continuous_compounding) return std::exp(-y * t);
    return std::pow(1.0 + y / compounding, -compounding * t);
}

inline double dirty_price_checked(const BondSpec& bond, double clean_price) {
    bond.validate();
    const double dirty = clean_price + bond.accrued_interest();
    if (!(dirty > 0.0) || !std::isfinite(dirty)) throw DomainError("dirty price must be positive");
    return dirty;
}

} // namespace detail

/// Price of the bond's contractual cash flows at a flat yield.
inline double price_from_yield(const BondSpec& bond, double y, int compounding) {
    const auto ts = bond.schedule();
    const double cpn = bond.coupon_payment();
    double pv = 0.0;
    for (double t : ts) pv += cpn * detail::yield_discount(y, t, compounding);
    return pv + detail::yield_discount(y, ts.back(), compounding);
}

/// Yield to maturity at the given compounding (0 for continuous).
inline double ytm(const BondSpec& bond, double clean_price, int compounding) {
    if (compounding < 0) throw DomainError("ytm: compounding must be >= 0");
    const double dirty = detail::dirty_price_checked(bond, clean_price);
    return detail::bracketed_root(
        [&](double y) { return price_from_yield(bond, y, compounding) - dirty; },
        detail::rate_bracket_lo, detail::rate_bracket_hi, "ytm");
}

/// Yield over a single benchmark yield.
inline double yield_spread(double bond_yield, double benchmark_yield) noexcept {
    return bond_yield - benchmark_yield;
}

/// Yield over the benchmark yield linearly interpolated at T.
inline double i_spread(double bond_yield, double maturity, double t1, double y1, double t2, double y2) {
    if (!(t1 < t2)) throw DomainError("i_spread: benchmark tenors must satisfy T1 < T2");
    if (maturity < t1 || maturity > t2) throw DomainError("i_spread: maturity outside benchmark range");
    const double w = (maturity - t1) / (t2 - t1);
    return bond_yield - ((1.0 - w) * y1 + w * y2);
}

/// Cash-flow PV at base discounting shifted by a constant spread.
inline double price_from_z_spread(const BondSpec& bond, const BaseCurve& base, double s) {
    const auto ts = bond.schedule();
    const double cpn = bond.coupon_payment();
    double pv = 0.0;
    for (double t : ts) pv += cpn * base.df(t) * std::exp(-s * t);
    return pv + base.df(ts.back()) * std::exp(-s * ts.back());
}

/// Constant spread over the base curve that reprices the dirty price.
inline double z_spread(const BondSpec& bond, double clean_price, const BaseCurve& base) {
    const double dirty = detail::dirty_price_checked(bond, clean_price);
    return detail::bracketed_root(
        [&](double s) { return price_from_z_spread(bond, base, s) - dirty; },
        detail::rate_bracket_lo, detail::rate_bracket_hi, "z_spread");
}

/// PV-weighted mean cash-flow time at the bond's Z-spread.
inline double z_spread_duration(const BondSpec& bond, double clean_price, const BaseCurve& base) {
    const double s = z_spread(bond, clean_price, base);
    const auto ts = bond.schedule();
    const double cpn = bond.coupon_payment();
    double pv = 0.0;
    double tpv = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double cf = cpn + (i + 1 == ts.size() ? 1.0 : 0.0);
        const double v = cf * base.df(ts[i]) * std::exp(-s * ts[i]);
        pv += v;
        tpv += ts[i] * v;
    }
    return tpv / pv;
}

/// Floating-rate note with per-period index fixings.
struct FrnSpec {
    double quoted_margin = 0.0;
    int freq = 4;
    double maturity = 1.0;
    /// Simple-compounded index rate for each period; one per payment.
    std::vector<double> fixings;

    void validate() const {
        if (freq <= 0) throw DomainError("FRN frequency must be positive");
        if (!on_grid(maturity, freq)) throw ScheduleError("FRN maturity must be a whole number of periods");
        if (fixings.size() != static_cast<std::size_t>(payment_count(maturity, freq))) {
            throw DomainError("FRN needs one fixing per period");
        }
    }
};

/// Forward index fixings implied by the base curve.
inline std::vector<double> project_fixings(const BaseCurve& base, int freq, double maturity) {
    if (!on_grid(maturity, freq)) throw ScheduleError("FRN maturity must be a whole number of periods");
    const auto ts = payment_times(maturity, freq);
    std::vector<double> out(ts.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double delta = ts[i] - prev;
        out[i] = (base.df(prev) / base.df(ts[i]) - 1.0) / delta;
        prev = ts[i];
    }
    return out;
}

/// FRN price for a given discount margin.
inline double frn_price(const FrnSpec& frn, double dm) {
    frn.validate();
    const double delta = 1.0 / frn.freq;
    double z = 1.0;
    double pv = 0.0;
    for (double l : frn.fixings) {
        z /= 1.0 + delta * (l + dm);
        pv += (l + frn.quoted_margin) * delta * z;
    }
    return pv + z;
}

/// Discount margin. Fixings are projected from the base curve when absent.
inline double discount_margin(FrnSpec frn, double price, const BaseCurve& base) {
    if (!(price > 0.0)) throw DomainError("FRN price must be positive");
    if (frn.fixings.empty()) frn.fixings = project_fixings(base, frn.freq, frn.maturity);
    frn.validate();
    return detail::bracketed_root([&](double dm) { return frn_price(frn, dm) - price; },
                                  detail::rate_bracket_lo, detail::rate_bracket_hi, "discount_margin");
}

} // namespace credit
