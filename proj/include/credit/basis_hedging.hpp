#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "bond.hpp"
#include "curves.hpp"
#include "detail/integrals.hpp"
#include "error.hpp"
#include "measures.hpp"
#include "pricing.hpp"
#include "survival.hpp"

namespace credit {

/// Forward price variants. `simple` keeps coupon, principal and recovery at
/// default; `corrected` adds the accrued-loss and early-discount terms.
enum class ForwardPriceForm { simple, corrected };

/// Projected forward price P(t, T) of the bond in the continuous-time model.
inline double fwd_bond_price(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc, double recovery,
                             double t, ForwardPriceForm form = ForwardPriceForm::simple) {
    detail::check_recovery(recovery);
    bond.validate();
    const double big_t = bond.maturity;
    if (!(t >= 0.0 && t <= big_t)) throw DomainError("fwd_bond_price: need 0 <= t <= T");
    const double norm = base.df(t) * sc.survival(t);
    if (!(norm > 0.0)) throw DomainError("fwd_bond_price: survival probability is zero at t");
    const auto in = detail::path_integrals(base, sc, t, big_t);
    const double a = in.survival / norm;
    const double b = in.default_density / norm;
    const double end = base.df(big_t) * sc.survival(big_t) / norm;
    const double c = bond.coupon;
    if (form == ForwardPriceForm::simple) return c * a + end + recovery * b;
    const double tq = 2.0 * bond.freq;
    return c * a + end - (c / tq) * (1.0 - end) + recovery * (1.0 + c / tq) * b;
}

/// Forward CDS notional (P - R) / (1 - R) for a given forward price.
inline double fwd_hedge_notional(double forward_price, double recovery) {
    detail::check_recovery(recovery);
    return (forward_price - recovery) / (1.0 - recovery);
}

inline double fwd_hedge_notional(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc,
                                 double recovery, double t, ForwardPriceForm form = ForwardPriceForm::simple) {
    return fwd_hedge_notional(fwd_bond_price(bond, base, sc, recovery, t, form), recovery);
}

/// Risk-free-equivalent coupon C - h(t) (P(t, T) - R).
inline double rfc_stream(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc, double recovery,
                         double t, ForwardPriceForm form = ForwardPriceForm::simple) {
    const double p = fwd_bond_price(bond, base, sc, recovery, t, form);
    return bond.coupon - sc.hazard(t) * (p - recovery);
}

struct HedgeLeg {
    double maturity = 0.0;
    /// Face fraction of protection bought; negative means protection sold.
    double notional = 0.0;
    /// Par CDS spread at this maturity.
    double spread = 0.0;
};

struct HedgePlan {
    std::vector<HedgeLeg> legs;
    /// rpv01-weighted aggregate spread of the legs.
    double cost = 0.0;
    /// PV of the exposure left unhedged, weighted by the default-leg measure.
    double residual_npv = 0.0;
};

namespace detail {

inline void sort_and_merge(std::vector<HedgeLeg>& legs) {
    std::sort(legs.begin(), legs.end(), [](const HedgeLeg& a, const HedgeLeg& b) { return a.maturity < b.maturity; });
    std::vector<HedgeLeg> merged;
    for (const auto& l : legs) {
        if (!merged.empty() && std::abs(merged.back().maturity - l.maturity) < 1e-12) {
            merged.back().notional += l.notional;
        } else {
            merged.push_back(l);
        }
    }
    legs = std::move(merged);
}

/// Sum n*s*pi / sum n*pi over the legs, +inf when the weights do not add up to a positive annuity.
inline double aggregate_spread(std::span<const HedgeLeg> legs, const BaseCurve& base, const SurvivalCurve& sc) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& l : legs) {
        const double pi = rpv01(l.maturity, 4, base, sc);
        num += l.notional * l.spread * pi;
        den += l.notional * pi;
    }
    return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

/// Quarterly hedge grid 0 = t_0 < ... < t_n = T rolled back from maturity.
inline std::vector<double> hedge_grid(double maturity) {
    std::vector<double> g{0.0};
    for (double t : payment_times(maturity, 4)) g.push_back(t);
    return g;
}

/// Default-leg weights Z(t_i)(Q(t_{i-1}) - Q(t_i))(1 - R) and forward notionals at t_i.
struct ExposureProfile {
    std::vector<double> times;
    std::vector<double> weights;
    std::vector<double> forward_notional;
};

inline ExposureProfile exposure_profile(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc,
                                        double recovery, ForwardPriceForm form) {
    ExposureProfile e;
    const auto grid = hedge_grid(bond.maturity);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        e.times.push_back(t);
        e.weights.push_back(base.df(t) * (sc.survival(grid[i - 1]) - sc.survival(t)) * (1.0 - recovery));
        e.forward_notional.push_back(fwd_hedge_notional(bond, base, sc, recovery, t, form));
    }
    return e;
}

inline double residual_npv(const ExposureProfile& e, std::span<const HedgeLeg> legs) {
    double npv = 0.0;
    for (std::size_t i = 0; i < e.times.size(); ++i) {
        double hedged = 0.0;
        for (const auto& l : legs) {
            if (e.times[i] <= l.maturity + 1e-12) hedged += l.notional;
        }
        npv += e.weights[i] * (e.forward_notional[i] - hedged);
    }
    return npv;
}

} // namespace detail

/// Staggered spot-CDS hedge on the given grid: a leg maturing at t_{i+1} with
/// notional (P(t_i) - P(t_{i+1})) / (1 - R), plus N^fwd(t_n) to the last grid point.
/// Empty grid means quarterly steps from 0 to maturity.
inline HedgePlan spot_hedge_notionals(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc,
                                      double recovery, std::vector<double> grid = {},
                                      ForwardPriceForm form = ForwardPriceForm::simple) {
    detail::check_recovery(recovery);
    if (grid.empty()) grid = detail::hedge_grid(bond.maturity);
    if (grid.size() < 2) throw DomainError("hedge grid needs at least two tenors");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= bond.maturity + 1e-12)) throw DomainError("hedge grid outside [0, T]");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("hedge grid must be strictly increasing");
    }
    std::vector<double> p;
    for (double t : grid) p.push_back(fwd_bond_price(bond, base, sc, recovery, std::min(t, bond.maturity), form));
    HedgePlan plan;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        plan.legs.push_back({grid[i + 1], (p[i] - p[i + 1]) / (1.0 - recovery), 0.0});
    }
    plan.legs.push_back({grid.back(), fwd_hedge_notional(p.back(), recovery), 0.0});
    detail::sort_and_merge(plan.legs);
    for (auto& l : plan.legs) l.spread = cds_par_spread(l.maturity, 4, base, sc, recovery);
    plan.cost = detail::aggregate_spread(plan.legs, base, sc);
    plan.residual_npv =
        detail::residual_npv(detail::exposure_profile(bond, base, sc, recovery, form), plan.legs);
    return plan;
}

/// Protection paid per unit face, (1 - R) times the notional of legs still alive at tau.
inline double hedge_payout(const HedgePlan& plan, double tau, double recovery) {
    double n = 0.0;
    for (const auto& l : plan.legs) {
        if (tau < l.maturity - 1e-12) n += l.notional;
    }
    return (1.0 - recovery) * n;
}

/// Constant spread over the CDS-implied survival curve reconciling the market price.
inline double basis_spread(const BondSpec& bond, double market_clean_price, const BaseCurve& base,
                           const SurvivalCurve& sc_cds, double recovery) {
    return das(bond, market_clean_price, base, sc_cds, recovery);
}

/// Face hedge to maturity plus one staggered leg to maturity m.
/// The staggered notional zeroes the default-weighted exposure NPV.
inline HedgePlan two_cds_plan(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc_cds,
                              double recovery, double m, ForwardPriceForm form = ForwardPriceForm::simple) {
    detail::check_recovery(recovery);
    if (!(m > 0.0 && m <= bond.maturity + 1e-12)) throw DomainError("hedge maturity must lie in (0, T]");
    const auto e = detail::exposure_profile(bond, base, sc_cds, recovery, form);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < e.times.size(); ++i) {
        num += e.weights[i] * (e.forward_notional[i] - 1.0);
        if (e.times[i] <= m + 1e-12) den += e.weights[i];
    }
    // without default risk there is nothing left to hedge
    if (!(den > 0.0) && num != 0.0) throw DomainError("no default weight before the staggered hedge maturity");
    const double n = den > 0.0 ? num / den : 0.0;
    HedgePlan plan;
    plan.legs.push_back({std::min(m, bond.maturity), n, 0.0});
    plan.legs.push_back({bond.maturity, 1.0, 0.0});
    detail::sort_and_merge(plan.legs);
    for (auto& l : plan.legs) l.spread = cds_par_spread(l.maturity, 4, base, sc_cds, recovery);
    plan.cost = detail::aggregate_spread(plan.legs, base, sc_cds);
    plan.residual_npv = detail::residual_npv(e, plan.legs);
    return plan;
}

/// Lowest-cost two-CDS plan over the candidate maturities. The final maturity
/// is always considered, so the result is never worse than a single CDS.
inline HedgePlan coarse_hedge(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc_cds,
                              double recovery, std::span<const double> candidate_maturities,
                              ForwardPriceForm form = ForwardPriceForm::simple) {
    if (candidate_maturities.empty()) throw DomainError("coarse_hedge: no candidate maturities");
    std::vector<double> cands(candidate_maturities.begin(), candidate_maturities.end());
    if (std::none_of(cands.begin(), cands.end(), [&](double m) { return std::abs(m - bond.maturity) < 1e-12; })) {
        cands.push_back(bond.maturity);
    }
    std::sort(cands.begin(), cands.end());
    HedgePlan best;
    best.cost = std::numeric_limits<double>::infinity();
    bool found = false;
    for (double m : cands) {
        if (!(m > 0.0 && m <= bond.maturity + 1e-12)) continue;
        const auto plan = two_cds_plan(bond, base, sc_cds, recovery, m, form);
        if (!found || plan.cost < best.cost) {
            best = plan;
            found = true;
        }
    }
    if (!found) throw DomainError("coarse_hedge: no candidate maturity inside (0, T]");
    return best;
}

/// Excess spread of the bond against the rpv01-weighted CDS spread of the plan.
inline double approx_basis(const BondSpec& bond, double market_clean_price, const BaseCurve& base,
                           const SurvivalCurve& sc_bond, const SurvivalCurve& sc_cds, double recovery,
                           const HedgePlan& plan) {
    if (plan.legs.empty()) throw DomainError("approx_basis: hedge plan has no legs");
    const double agg = detail::aggregate_spread(plan.legs, base, sc_cds);
    if (!std::isfinite(agg)) throw DomainError("approx_basis: hedge annuity is not positive");
    return excess_spread(bond, market_clean_price, base, sc_bond, recovery) - agg;
}

} // namespace credit
