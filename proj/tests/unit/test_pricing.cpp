#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "credit/conventional.hpp"
#include "credit/pricing.hpp"
#include "oracles.hpp"

using namespace credit;

namespace {

BaseCurve sloped_base() {
    return BaseCurve::from_zero_rates(std::vector<double>{0.5, 1, 2, 3, 5, 7, 10},
                                      std::vector<double>{0.011, 0.0115, 0.016, 0.021, 0.03, 0.036, 0.042});
}

SurvivalCurve knotted_curve() {
    return SurvivalCurve::spline(SplineBasis(0.15, 4, {Knot{4, 4.0}}), {1.1, -0.2, 0.1, 0.3}, 20.0);
}

SurvivalCurve stepped_curve() {
    return SurvivalCurve::piecewise_hazard({{1.0, 0.01}, {2.5, 0.02}, {4.0, 0.045}, {7.0, 0.03}});
}

} // namespace

TEST(BondPv, RiskFreeLimit) {
    const auto base = sloped_base();
    const BondSpec b{0.07, 2, 6.0, 0.0};
    const double pv = bond_pv_frp(b, base, SurvivalCurve::flat_hazard(0.0), 0.4);
    EXPECT_NEAR(pv, price_from_z_spread(b, base, 0.0), 1e-14);
}

TEST(BondPv, ZeroRecoveryZeroCoupon) {
    const auto base = sloped_base();
    const auto sc = knotted_curve();
    const BondSpec b{0.0, 2, 6.5, 0.0};
    EXPECT_NEAR(bond_pv_frp(b, base, sc, 0.0), base.df(6.5) * sc.survival(6.5), 1e-15);
}

TEST(BondPv, TermByTermOracle) {
    const BondSpec b{0.06, 2, 1.0, 0.0};
    const double pv = bond_pv_frp(b, BaseCurve::flat(0.0), SurvivalCurve::flat_hazard(0.02), 0.4);
    const double q1 = std::exp(-0.01), q2 = std::exp(-0.02);
    const double ref = q2 + 0.03 * (q1 + q2) + 0.4 * 1.015 * (1.0 - q2);
    EXPECT_NEAR(pv, ref, 1e-15);
    EXPECT_NEAR(pv, 0.980199 + 0.03 * 1.970249 + 0.406 * 0.019801, 1e-6);
    // quoted to six decimals from rounded inputs
    EXPECT_NEAR(pv, 1.047346, 1e-6);
}

TEST(BondPv, GeneralCurvesMatchOracle) {
    const auto base = sloped_base();
    for (const auto& sc : {knotted_curve(), stepped_curve()}) {
        for (const auto& b : {BondSpec{0.08, 2, 7.25, 0.25}, BondSpec{0.05, 4, 3.0, 0.0}, BondSpec{0.1, 1, 12.0, 0.5}}) {
            for (double das : {0.0, 0.013, -0.004}) {
                const double ref = oracle::frp_pv(
                    b.coupon, b.freq, b.maturity, 0.35, [&](double t) { return base.df(t); },
                    [&](double t) { return sc.survival(t); }, das);
                EXPECT_NEAR(bond_pv_frp(b, base, sc, 0.35, das), ref, 1e-14);
            }
        }
    }
}

TEST(BondPv, DecreasingInHazardShift) {
    const auto base = sloped_base();
    const BondSpec b{0.065, 2, 8.0, 0.0};
    double prev = 10.0;
    for (double h = 0.0; h <= 0.2; h += 0.01) {
        const double pv = bond_pv_frp(b, base, SurvivalCurve::piecewise_hazard({{3.0, 0.01 + h}, {8.0, 0.02 + h}}), 0.4);
        EXPECT_LT(pv, prev);
        prev = pv;
    }
}

TEST(BondPv, RecoveryValidation) {
    EXPECT_THROW(RecoveryAssumption(1.0), DomainError);
    EXPECT_THROW(RecoveryAssumption(-0.1), DomainError);
    const RecoveryAssumption r(0.4);
    EXPECT_EQ(r.principal(), r.accrued());
}

TEST(ContinuousPrice, ZeroCouponZeroRecovery) {
    const BondSpec b{0.0, 2, 5.0, 0.0};
    const double p = bond_price_continuous(b, BaseCurve::flat(0.03), SurvivalCurve::flat_hazard(0.02), 0.0, 0.01);
    EXPECT_NEAR(p, std::exp(-(0.03 + 0.02 + 0.01) * 5.0), 1e-15);
}

TEST(ContinuousPrice, ParLimitAsFrequencyGrows) {
    const double r = 0.05;
    double prev_err = 1.0;
    for (int q : {1, 2, 4}) {
        const BondSpec b{r, q, 5.0, 0.0};
        const double p = bond_price_continuous(b, BaseCurve::flat(r), SurvivalCurve::flat_hazard(0.0), 0.4);
        const double err = std::abs(p - 1.0);
        EXPECT_LT(err, prev_err);
        EXPECT_NEAR(err, r / (2.0 * q) * (1.0 - std::exp(-r * 5.0)), 1e-14);
        prev_err = err;
    }
}

TEST(ContinuousPrice, CloseToDiscrete) {
    // empirical bound from the pre-build oracle run: gap 6.2e-4 at C=0 falling to 5.8e-4 at C=10%
    const auto base = BaseCurve::flat(0.05);
    const auto sc = SurvivalCurve::flat_hazard(0.03);
    for (double c = 0.0; c <= 0.1000001; c += 0.01) {
        const BondSpec b{c, 2, 5.0, 0.0};
        const double diff = bond_price_continuous(b, base, sc, 0.4) - bond_pv_frp(b, base, sc, 0.4);
        EXPECT_LT(std::abs(diff), 7e-4) << c;
        EXPECT_GT(diff, 5e-4) << c;
    }
}

TEST(ContinuousPrice, MatchesQuadratureOnCurvedInputs) {
    const auto base = sloped_base();
    for (const auto& sc : {knotted_curve(), stepped_curve()}) {
        const BondSpec b{0.07, 2, 9.0, 0.0};
        const double das = 0.006, r = 0.4;
        std::vector<double> cuts{0.5, 1, 2, 3, 5, 7, 10};
        for (double x : sc.breakpoints()) cuts.push_back(x);
        auto disc = [&](double u) { return base.df(u) * sc.survival(u) * std::exp(-das * u); };
        const double a = oracle::integrate(disc, 0.0, 9.0, cuts);
        const double d = oracle::integrate([&](double u) { return sc.hazard(u) * disc(u); }, 0.0, 9.0, cuts);
        const double e = disc(9.0);
        const double ref = 0.07 * a + e - 0.07 / 4.0 * (1.0 - e) + r * (1.0 + 0.07 / 4.0) * d;
        EXPECT_NEAR(bond_price_continuous(b, base, sc, r, das), ref, 1e-12);
    }
}

TEST(Cds, NoDefaultRisk) {
    const auto base = BaseCurve::flat(0.03);
    const auto sc = SurvivalCurve::flat_hazard(0.0);
    const CdsSpec cds{0.01, 4, 5.0, 0.4};
    double annuity = 0.0;
    for (int i = 1; i <= 20; ++i) annuity += base.df(i / 4.0);
    EXPECT_NEAR(cds_upfront(cds, base, sc), -0.01 * annuity / 4.0, 1e-15);
    EXPECT_EQ(cds_par_spread(5.0, 4, base, sc, 0.4), 0.0);
    EXPECT_NEAR(rpv01(5.0, 4, BaseCurve::flat(0.0), sc), 5.0, 1e-14);
    EXPECT_LT(rpv01(1e-3, 4, base, SurvivalCurve::flat_hazard(0.02)), 2e-3);
}

TEST(Cds, SummationOracles) {
    const auto q = [](double h) { return [h](double t) { return std::exp(-h * t); }; };
    {
        const auto z = [](double t) { return std::exp(-0.02 * t); };
        const auto surv = q(0.03);
        double prot = 0.0, ann = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double t = i / 4.0, s = (i - 1) / 4.0;
            prot += z(t) * (surv(s) - surv(t));
            ann += z(t) * surv(t);
        }
        const double ref = (1.0 - 0.4 - 0.01 / 8.0) * prot - 0.01 / 4.0 * ann;
        const double up = cds_upfront(CdsSpec{0.01, 4, 5.0, 0.4}, BaseCurve::flat(0.02), SurvivalCurve::flat_hazard(0.03));
        EXPECT_NEAR(up, ref, 1e-14);
        EXPECT_NEAR(up, 0.035303151576508845, 1e-14);
    }
    const auto base = BaseCurve::flat(0.04);
    const auto sc = SurvivalCurve::flat_hazard(0.02);
    EXPECT_NEAR(cds_par_spread(5.0, 4, base, sc, 0.4), 0.011999975000062507, 1e-15);
    EXPECT_NEAR(rpv01(5.0, 4, base, sc), 4.298124883381336, 1e-13);
}

TEST(Cds, ParSpreadIdentities) {
    const auto base = sloped_base();
    for (const auto& sc : {knotted_curve(), stepped_curve()}) {
        for (double t : {1.0, 3.0, 5.0, 7.0, 10.0}) {
            const double s = cds_par_spread(t, 4, base, sc, 0.4);
            const CdsSpec at_par{s, 4, t, 0.4};
            EXPECT_NEAR(cds_upfront(at_par, base, sc), 0.0, 1e-12);
            for (double c : {0.0, 0.01, 0.05}) {
                const CdsSpec cds{c, 4, t, 0.4};
                EXPECT_NEAR(cds_upfront(cds, base, sc), cds_mtm(cds, s, rpv01(t, 4, base, sc)), 1e-12);
            }
        }
    }
}

TEST(Cds, FlatZeroRateNearTriangle) {
    const auto base = BaseCurve::flat(0.0);
    for (double h : {0.005, 0.02, 0.05}) {
        const double s = cds_par_spread(5.0, 4, base, SurvivalCurve::flat_hazard(h), 0.4);
        EXPECT_NEAR(s, 0.6 * h, 1e-6);
        EXPECT_NEAR(s, 8.0 * 0.6 * std::tanh(h / 8.0), 1e-15);
    }
}

TEST(Cds, MtmExamples) {
    EXPECT_EQ(cds_mtm(CdsSpec{0.01, 4, 5.0, 0.4}, 0.01, 4.5), 0.0);
    EXPECT_NEAR(cds_mtm(CdsSpec{0.01, 4, 5.0, 0.4}, 0.02, 4.5), 0.045, 1e-16);
    EXPECT_LT(cds_mtm(CdsSpec{0.05, 4, 5.0, 0.4}, 0.01, 4.5), 0.0);
}

TEST(CdsContinuous, FlatCorrectedTriangle) {
    const double f = 0.04, h = 0.02;
    const double s = cds_par_spread_continuous(5.0, 4, BaseCurve::flat(f), SurvivalCurve::flat_hazard(h), 0.4);
    EXPECT_NEAR(s, 0.6 * h / (1.0 - f / 8.0), 1e-15);
    EXPECT_NEAR(s, 0.012060301507537691, 1e-15);
    EXPECT_NEAR(cds_par_spread_continuous(5.0, 4, BaseCurve::flat(0.0), SurvivalCurve::flat_hazard(h), 0.4), 0.6 * h,
                1e-15);
}

TEST(CdsContinuous, MatchesQuadrature) {
    const auto base = sloped_base();
    for (const auto& sc : {knotted_curve(), stepped_curve()}) {
        std::vector<double> cuts{0.5, 1, 2, 3, 5, 7, 10};
        for (double x : sc.breakpoints()) cuts.push_back(x);
        auto g = [&](double u) { return base.df(u) * sc.survival(u); };
        const double num = oracle::integrate([&](double u) { return sc.hazard(u) * g(u); }, 0.0, 8.0, cuts);
        const double den = oracle::integrate([&](double u) { return (1.0 - base.fwd_rate(u) / 8.0) * g(u); }, 0.0, 8.0, cuts);
        EXPECT_NEAR(cds_par_spread_continuous(8.0, 4, base, sc, 0.4), 0.6 * num / den, 1e-13);
    }
}

TEST(RecoverySwap, HedgeRatios) {
    EXPECT_NEAR(recovery_swap_hedge(0.4, 0.0).dds, 0.6, 1e-16);
    EXPECT_NEAR(recovery_swap_hedge(0.3, 0.3).dds, 1.0, 1e-16);
    EXPECT_EQ(recovery_swap_hedge(0.3, 0.1).cds, 1.0);
    EXPECT_THROW((void)recovery_swap_hedge(0.4, 1.0), DomainError);
    EXPECT_NEAR(dds_spread_from_cds(0.01, 0.0, 0.5), 0.02, 1e-16);
    EXPECT_NEAR(dds_spread_from_cds(0.013, 0.35, 0.35), 0.013, 1e-16);
    EXPECT_NEAR(credit_triangle_hazard(0.03, 0.4), 0.05, 1e-16);
    EXPECT_NEAR(credit_triangle_hazard(0.03, 0.0), 0.03, 1e-16);
    // zero-recovery DDS pays the hazard rate in a flat world
    const double h = 0.025, rrs = 0.45;
    const double s_cds = h * (1.0 - rrs);
    EXPECT_NEAR(dds_spread_from_cds(s_cds, 0.0, rrs), h, 1e-16);
}

TEST(RecoverySwap, ReplicationNetsToZeroInEveryScenario) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 0.95), spread(0.001, 0.05);
    for (int draw = 0; draw < 100; ++draw) {
        TriangleQuotes tq;
        tq.recovery_swap_rate = u(rng);
        tq.dds_recovery = u(rng);
        tq.cds_spread = spread(rng);
        tq.dds_spread = dds_spread_from_cds(tq.cds_spread, tq.dds_recovery, tq.recovery_swap_rate);
        const auto hedge = recovery_swap_hedge(tq.recovery_swap_rate, tq.dds_recovery);
        const double realized = u(rng);
        const auto flows = recovery_swap_replication(tq, hedge, realized);
        // no default: premiums on each of 20 quarterly dates, nothing at maturity
        double no_default = flows.upfront + flows.at_maturity;
        for (int i = 0; i < 20; ++i) no_default += flows.premium / 4.0;
        EXPECT_NEAR(no_default, 0.0, 1e-15);
        for (int k = 1; k <= 20; ++k) {
            double total = flows.upfront;
            for (int i = 0; i < k; ++i) total += flows.premium / 4.0;
            total += flows.on_default;
            EXPECT_NEAR(total, 0.0, 1e-15);
        }
    }
}

TEST(CreditTriangle, ContinuousLimitRoundTrip) {
    const double h = credit_triangle_hazard(0.018, 0.4);
    const double s = cds_par_spread(5.0, 52, BaseCurve::flat(0.0), SurvivalCurve::flat_hazard(h), 0.4);
    EXPECT_NEAR(s, 0.018, 1e-6);
}

TEST(ZeroRecovery, ZSpreadEqualsZzSpread) {
    const auto base = sloped_base();
    for (const auto& sc : {knotted_curve(), stepped_curve()}) {
        for (double t : {0.5, 2.0, 5.0, 9.5}) {
            const BondSpec zero{0.0, 2, t, 0.0};
            const double p = bond_pv_frp(zero, base, sc, 0.0);
            EXPECT_NEAR(p, base.df(t) * sc.survival(t), 1e-15);
            EXPECT_NEAR(z_spread(zero, p, base), sc.zz_spread(t), 1e-10);
        }
    }
}
