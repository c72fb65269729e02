#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bond.hpp"
#include "curves.hpp"
#include "detail/numerics.hpp"
#include "error.hpp"
#include "pricing.hpp"
#include "survival.hpp"

namespace credit {

namespace detail {

/// Sums entering the par-coupon formulas.
struct ParSums {
    double annuity = 0.0;     // sum Z_i Q_i
    double protection = 0.0;  // sum Z_i (Q_{i-1} - Q_i)
    double terminal = 0.0;    // Z_N Q_N
};

template <class Surv>
ParSums par_sums(double maturity, int freq, const BaseCurve& base, Surv&& q) {
    ParSums s;
    double prev = 1.0;
    for (double t : payment_times(maturity, freq)) {
        const double z = base.df(t);
        const double qi = q(t);
        s.annuity += z * qi;
        s.protection += z * (prev - qi);
        prev = qi;
        s.terminal = z * qi;
    }
    return s;
}

// Coupon making the clean price par, given accrued time.
inline double par_coupon_from_sums(const ParSums& s, int freq, double recovery, double accrued_time) {
    const double den = s.annuity + 0.5 * recovery * s.protection - freq * accrued_time;
    if (!(den > 0.0)) throw DomainError("par coupon denominator is not positive");
    return freq * (1.0 - s.terminal - recovery * s.protection) / den;
}

inline void check_recovery(double r) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("recovery must lie in [0, 1)");
}

} // namespace detail

/// Coupon of a hypothetical bond, paying on the regular grid, priced at par.
inline double par_coupon(double maturity, int freq, const BaseCurve& base, const SurvivalCurve& sc,
                         double recovery) {
    detail::check_recovery(recovery);
    if (!on_grid(maturity, freq)) {
        throw ScheduleError("par_coupon: maturity " + std::to_string(maturity) + " is not a whole number of periods");
    }
    const auto s = detail::par_sums(maturity, freq, base, [&](double t) { return sc.survival(t); });
    return detail::par_coupon_from_sums(s, freq, recovery, 0.0);
}

/// Par coupon over the riskless par yield.
inline double p_spread(double maturity, int freq, const BaseCurve& base, const SurvivalCurve& sc,
                       double recovery) {
    return par_coupon(maturity, freq, base, sc, recovery) - base.par_yield(maturity, freq);
}

/// Constant coupon price: clean price of a current-coupon bond.
inline double ccp(double maturity, double coupon, int freq, const BaseCurve& base, const SurvivalCurve& sc,
                  double recovery) {
    return bond_pv_frp(BondSpec{coupon, freq, maturity, 0.0}, base, sc, recovery);
}

/// Bond-implied CDS spread (quarterly premium).
inline double bcds(double maturity, const BaseCurve& base, const SurvivalCurve& sc, double recovery) {
    return cds_par_spread(maturity, 4, base, sc, recovery);
}

/// Forward CDS spread from spot spreads and risky annuities.
inline double fwd_cds_spread(double t1, double t2, const BaseCurve& base, const SurvivalCurve& sc,
                             double recovery, int freq = 4) {
    if (!(t1 > 0.0 && t2 > t1)) throw DomainError("fwd_cds_spread: need 0 < t1 < t2");
    const double kappa = rpv01(t1, freq, base, sc) / rpv01(t2, freq, base, sc);
    if (!(kappa < 1.0)) throw DomainError("fwd_cds_spread: annuity ratio must be below one");
    const double s1 = cds_par_spread(t1, freq, base, sc, recovery);
    const double s2 = cds_par_spread(t2, freq, base, sc, recovery);
    return (s2 - kappa * s1) / (1.0 - kappa);
}

/// Forward CDS spread from forward discount and forward survival curves.
inline double fwd_cds_spread_forward_curves(double t1, double t2, const BaseCurve& base, const SurvivalCurve& sc,
                                            double recovery, int freq = 4) {
    detail::check_recovery(recovery);
    if (!(t1 > 0.0 && t2 > t1)) throw DomainError("fwd_cds_spread: need 0 < t1 < t2");
    const double z1 = base.df(t1);
    const auto s = detail::cds_sums(
        t1, t2, freq, [&](double t) { return base.df(t) / z1; }, [&](double t) { return sc.fwd_survival(t1, t); });
    return (1.0 - recovery) * s.protection / s.premium;
}

/// Model clean price of a bond on the fitted curve.
inline double fitted_price(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc, double recovery) {
    return bond_pv_frp(bond, base, sc, recovery) - bond.accrued_interest();
}

/// Coupon at which the bond (with its accrued time) would price at par clean.
inline double fitted_par_coupon(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc,
                                double recovery) {
    detail::check_recovery(recovery);
    bond.validate();
    const auto s = detail::par_sums(bond.maturity, bond.freq, base, [&](double t) { return sc.survival(t); });
    return detail::par_coupon_from_sums(s, bond.freq, recovery, bond.accrued_time);
}

/// Riskless counterpart of fitted_par_coupon on the same schedule.
inline double base_par_coupon(const BondSpec& bond, const BaseCurve& base) {
    bond.validate();
    const auto s = detail::par_sums(bond.maturity, bond.freq, base, [](double) { return 1.0; });
    return detail::par_coupon_from_sums(s, bond.freq, 0.0, bond.accrued_time);
}

inline double fitted_p_spread(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc,
                              double recovery) {
    return fitted_par_coupon(bond, base, sc, recovery) - base_par_coupon(bond, base);
}

/// Constant extra discount rate reconciling the market price with the curve.
/// Positive means the bond is cheap to the curve.
inline double das(const BondSpec& bond, double market_clean_price, const BaseCurve& base, const SurvivalCurve& sc,
                  double recovery) {
    detail::check_recovery(recovery);
    bond.validate();
    const double dirty = market_clean_price + bond.accrued_interest();
    if (!(dirty > 0.0)) throw DomainError("das: dirty price must be positive");
    return detail::bracketed_root(
        [&](double s) { return bond_pv_frp(bond, base, sc, recovery, s) - dirty; }, detail::rate_bracket_lo,
        detail::rate_bracket_hi, "das");
}

/// Fitted P-spread plus DAS. Not a discount rate.
inline double excess_spread(const BondSpec& bond, double market_clean_price, const BaseCurve& base,
                            const SurvivalCurve& sc, double recovery) {
    return fitted_p_spread(bond, base, sc, recovery) + das(bond, market_clean_price, base, sc, recovery);
}

/// Tenors 0.5..10 by 0.5, then 11..30 by 1.
inline std::vector<double> default_report_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 20; ++i) g.push_back(0.5 * i);
    for (int t = 11; t <= 30; ++t) g.push_back(t);
    return g;
}

struct ReportConfig {
    std::vector<double> grid = default_report_grid();
    std::vector<double> ccp_coupons{0.06, 0.08, 0.10};
    int freq = 2;
};

struct TermStructureRow {
    double tenor = 0.0;
    double survival = 0.0;
    double hazard = 0.0;
    double zz_spread = 0.0;
    double par_coupon = 0.0;
    double p_spread = 0.0;
    std::vector<double> ccp;
    double bcds = 0.0;
};

struct TermStructureReport {
    std::vector<double> ccp_coupons;
    std::vector<TermStructureRow> rows;
};

inline TermStructureReport term_structure_report(const BaseCurve& base, const SurvivalCurve& sc, double recovery,
                                                 const ReportConfig& cfg = {}) {
    TermStructureReport rep;
    rep.ccp_coupons = cfg.ccp_coupons;
    double prev = 0.0;
    for (double t : cfg.grid) {
        if (!(t > prev)) throw DomainError("report grid must be positive and strictly increasing");
        prev = t;
        TermStructureRow r;
        r.tenor = t;
        r.survival = sc.survival(t);
        r.hazard = sc.hazard(t);
        r.zz_spread = sc.zz_spread(t);
        r.par_coupon = par_coupon(t, cfg.freq, base, sc, recovery);
        r.p_spread = r.par_coupon - base.par_yield(t, cfg.freq);
        for (double c : cfg.ccp_coupons) r.ccp.push_back(ccp(t, c, cfg.freq, base, sc, recovery));
        r.bcds = bcds(t, base, sc, recovery);
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

} // namespace credit
