#pragma once

#include <cmath>
#include <vector>

#include "bond.hpp"
#include "curves.hpp"
#include "detail/integrals.hpp"
#include "error.hpp"
#include "survival.hpp"

namespace credit {

/// Fractional recovery of par. Principal and accrued recover at the same rate.
class RecoveryAssumption {
public:
    // Implicit so that plain rates can be passed where an assumption is expected.
    constexpr RecoveryAssumption(double rate) : rate_(rate) {  // NOLINT(google-explicit-constructor)
        if (!(rate >= 0.0 && rate < 1.0)) throw DomainError("recovery must lie in [0, 1)");
    }

    [[nodiscard]] constexpr double rate() const noexcept { return rate_; }
    [[nodiscard]] constexpr double principal() const noexcept { return rate_; }
    [[nodiscard]] constexpr double accrued() const noexcept { return rate_; }

private:
    double rate_;
};

/// CDS contract on unit notional.
struct CdsSpec {
    double contractual_coupon = 0.0;
    int freq = 4;
    double maturity = 5.0;
    double recovery = 0.4;

    void validate() const {
        if (!(recovery >= 0.0 && recovery < 1.0)) throw DomainError("CDS recovery must lie in [0, 1)");
        if (!(maturity > 0.0)) throw DomainError("CDS maturity must be > 0");
        if (freq <= 0) throw DomainError("CDS frequency must be positive");
    }
};

namespace detail {

/// Discrete CDS-leg sums over the schedule rolled back from maturity.
struct CdsSums {
    double protection = 0.0;  // sum Z_i (Q_{i-1} - Q_i)
    double premium = 0.0;     // sum (dt_i / 2) Z_i (Q_{i-1} + Q_i), the risky annuity
};

template <class Disc, class Surv>
CdsSums cds_sums(double start, double maturity, int freq, Disc&& z, Surv&& q) {
    CdsSums s;
    const auto ts = payment_times(maturity - start, freq);
    double prev_q = q(start);
    double prev_t = start;
    for (double dt : ts) {
        const double t = start + dt;
        const double zi = z(t);
        const double qi = q(t);
        s.protection += zi * (prev_q - qi);
        s.premium += 0.5 * (t - prev_t) * zi * (prev_q + qi);
        prev_q = qi;
        prev_t = t;
    }
    return s;
}

inline CdsSums cds_sums(double maturity, int freq, const BaseCurve& base, const SurvivalCurve& sc) {
    return cds_sums(
        0.0, maturity, freq, [&](double t) { return base.df(t); }, [&](double t) { return sc.survival(t); });
}

} // namespace detail

/// Dirty PV with recovery of par paid at the next coupon date after default.
inline double bond_pv_frp(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc,
                          RecoveryAssumption rec, double das = 0.0) {
    const auto ts = bond.schedule();
    if (ts.empty()) throw DomainError("bond schedule is empty");
    const double cpn = bond.coupon_payment();
    double coupons = 0.0;
    double recovery = 0.0;
    double prev_q = 1.0;
    for (double t : ts) {
        const double zi = base.df(t) * std::exp(-das * t);
        const double qi = sc.survival(t);
        coupons += zi * qi;
        recovery += zi * (prev_q - qi);
        prev_q = qi;
    }
    const double tn = ts.back();
    const double principal = base.df(tn) * std::exp(-das * tn) * prev_q;
    return principal + cpn * coupons + rec.rate() * (1.0 + bond.coupon / (2.0 * bond.freq)) * recovery;
}

/// Clean price in the continuous-time approximation with the accrued-loss
/// and early-discount corrections.
inline double bond_price_continuous(const BondSpec& bond, const BaseCurve& base, const SurvivalCurve& sc,
                                    RecoveryAssumption rec, double das = 0.0) {
    bond.validate();
    const double c = bond.coupon;
    const double tq = 2.0 * bond.freq;
    const double big_t = bond.maturity;
    const auto in = detail::path_integrals(base, sc, 0.0, big_t, das);
    const double end = base.df(big_t) * sc.survival(big_t) * std::exp(-das * big_t);
    return c * in.survival + end - (c / tq) * (1.0 - end) + rec.rate() * (1.0 + c / tq) * in.default_density;
}

/// Risky annuity of one unit of running premium. Premium accrues over the
/// actual period length, which is 1/q except for a short front stub.
inline double rpv01(double maturity, int freq, const BaseCurve& base, const SurvivalCurve& sc) {
    return detail::cds_sums(maturity, freq, base, sc).premium;
}

inline double cds_par_spread(double maturity, int freq, const BaseCurve& base, const SurvivalCurve& sc,
                             double recovery) {
    if (!(recovery >= 0.0 && recovery < 1.0)) throw DomainError("recovery must lie in [0, 1)");
    const auto s = detail::cds_sums(maturity, freq, base, sc);
    if (!(s.premium > 0.0)) throw DomainError("CDS premium leg is zero");
    return (1.0 - recovery) * s.protection / s.premium;
}

/// Upfront paid by the protection buyer: protection leg less the coupon
/// annuity, with half a period of premium accrued at default.
inline double cds_upfront(const CdsSpec& cds, const BaseCurve& base, const SurvivalCurve& sc) {
    cds.validate();
    const auto s = detail::cds_sums(cds.maturity, cds.freq, base, sc);
    return (1.0 - cds.recovery) * s.protection - cds.contractual_coupon * s.premium;
}

/// Mark-to-market from the current par spread and risky annuity.
inline double cds_mtm(const CdsSpec& cds, double par_spread, double risky_annuity) noexcept {
    return (par_spread - cds.contractual_coupon) * risky_annuity;
}

/// Par spread in the continuous-time approximation.
inline double cds_par_spread_continuous(double maturity, int freq, const BaseCurve& base,
                                        const SurvivalCurve& sc, double recovery) {
    if (!(recovery >= 0.0 && recovery < 1.0)) throw DomainError("recovery must lie in [0, 1)");
    if (!(maturity > 0.0) || freq <= 0) throw DomainError("invalid CDS maturity or frequency");
    const auto in = detail::path_integrals(base, sc, 0.0, maturity);
    const double den = in.survival - in.forward_weighted / (2.0 * freq);
    if (!(den > 0.0)) throw DomainError("continuous CDS premium leg is not positive");
    return (1.0 - recovery) * in.default_density / den;
}

/// Quotes linking CDS, digital default swaps and recovery swaps.
struct TriangleQuotes {
    double cds_spread = 0.0;
    double dds_spread = 0.0;
    double dds_recovery = 0.0;
    double recovery_swap_rate = 0.4;
};

struct HedgeRatios {
    double cds = 1.0;
    double dds = 1.0;
};

/// Notionals hedging a unit payer recovery swap (short CDS, long DDS).
inline HedgeRatios recovery_swap_hedge(double recovery_swap_rate, double dds_recovery) {
    if (!(dds_recovery >= 0.0 && dds_recovery < 1.0)) throw DomainError("DDS recovery must lie in [0, 1)");
    if (!(recovery_swap_rate >= 0.0 && recovery_swap_rate < 1.0)) {
        throw DomainError("recovery swap rate must lie in [0, 1)");
    }
    return {1.0, (1.0 - recovery_swap_rate) / (1.0 - dds_recovery)};
}

inline double dds_spread_from_cds(double cds_spread, double dds_recovery, double recovery_swap_rate) {
    if (!(recovery_swap_rate >= 0.0 && recovery_swap_rate < 1.0)) {
        throw DomainError("recovery swap rate must lie in [0, 1)");
    }
    return cds_spread * (1.0 - dds_recovery) / (1.0 - recovery_swap_rate);
}

/// Flat hazard implied by a CDS spread; exact only for flat curves.
inline double credit_triangle_hazard(double cds_spread, double recovery_swap_rate) {
    if (!(recovery_swap_rate >= 0.0 && recovery_swap_rate < 1.0)) {
        throw DomainError("recovery swap rate must lie in [0, 1)");
    }
    return cds_spread / (1.0 - recovery_swap_rate);
}

/// Net cash flows of the recovery-swap replication per unit notional.
struct ReplicationFlows {
    double upfront = 0.0;
    double premium = 0.0;
    double on_default = 0.0;
    double at_maturity = 0.0;
};

inline ReplicationFlows recovery_swap_replication(const TriangleQuotes& quotes, const HedgeRatios& hedge,
                                                  double realized_recovery) {
    ReplicationFlows f;
    f.premium = -hedge.dds * quotes.dds_spread + hedge.cds * quotes.cds_spread;
    f.on_default = (quotes.recovery_swap_rate - realized_recovery) + hedge.dds * (1.0 - quotes.dds_recovery) -
                   hedge.cds * (1.0 - realized_recovery);
    return f;
}

} // namespace credit
