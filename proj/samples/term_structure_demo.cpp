// Fits a survival curve to a small synthetic bond universe, prints part of the
// term-structure report and the coarse CDS hedge of a premium bond.

#include <cstdio>
#include <vector>

#include "credit/basis_hedging.hpp"
#include "credit/calibration.hpp"
#include "credit/measures.hpp"

using namespace credit;

int main() {
    const auto base = BaseCurve::from_zero_rates(std::vector<double>{0.5, 1, 2, 3, 5, 7, 10, 20, 30},
                                                 std::vector<double>{0.011, 0.0115, 0.016, 0.021, 0.03, 0.036, 0.042,
                                                                     0.048, 0.05});
    const double rec = 0.4;
    const auto truth = SurvivalCurve::spline(SplineBasis(0.065), {0.7, 0.5, -0.2}, 25.0);

    struct Line {
        double coupon, maturity, accrued, cheapen;
    };
    const std::vector<Line> lines{{0.045, 1.5, 0.0, 0.0},   {0.05, 2.0, 0.1, 0.004},  {0.0625, 3.0, 0.25, -0.003},
                                  {0.07, 3.75, 0.0, 0.0},   {0.055, 5.0, 0.4, 0.006}, {0.08, 6.0, 0.0, -0.002},
                                  {0.0675, 7.0, 0.2, 0.0},  {0.09, 8.5, 0.0, 0.005},  {0.06, 10.0, 0.3, -0.004},
                                  {0.0725, 12.0, 0.0, 0.0}, {0.085, 15.0, 0.15, 0.0}, {0.065, 20.0, 0.0, 0.003}};
    std::vector<BondQuote> quotes;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        BondQuote q;
        q.id = "BOND" + std::to_string(i + 1);
        q.spec = BondSpec{lines[i].coupon, 2, lines[i].maturity, lines[i].accrued};
        q.clean_price = fitted_price(q.spec, base, truth, rec) - lines[i].cheapen;
        quotes.push_back(q);
    }

    const auto fit = fit_survival(quotes, base);
    std::printf("eta %.4f  weighted error %.3g\n\n", fit.eta, fit.weighted_error);
    std::printf("%-7s %8s %8s %8s %8s\n", "bond", "market", "fitted", "resid", "DAS bp");
    for (std::size_t j = 0; j < fit.ids.size(); ++j) {
        std::printf("%-7s %8.4f %8.4f %8.4f %8.1f\n", fit.ids[j].c_str(), fit.market_prices[j], fit.fitted_prices[j],
                    fit.residuals[j], fit.das[j] * 1e4);
    }

    ReportConfig cfg;
    cfg.grid = {1, 2, 3, 5, 7, 10, 15, 20};
    const auto rep = term_structure_report(base, fit.curve, rec, cfg);
    std::printf("\n%5s %8s %8s %9s %9s %8s\n", "tenor", "Q", "hazard", "par cpn", "P-sprd bp", "BCDS bp");
    for (const auto& r : rep.rows) {
        std::printf("%5.1f %8.5f %8.5f %9.5f %9.1f %8.1f\n", r.tenor, r.survival, r.hazard, r.par_coupon,
                    r.p_spread * 1e4, r.bcds * 1e4);
    }

    const std::vector<CdsQuote> cds{{1, 0.0080}, {3, 0.0120}, {5, 0.0150}, {7, 0.0160}, {10, 0.0170}};
    const auto sc_cds = calibrate_from_cds(cds, base, rec);
    const BondSpec premium{0.09, 2, 10.0, 0.0};
    const std::vector<double> candidates{1, 2, 3, 5, 7};
    const auto plan = coarse_hedge(premium, base, sc_cds, rec, candidates);
    std::printf("\ncoarse hedge of a 9%% 10y bond, cost %.1fbp\n", plan.cost * 1e4);
    for (const auto& l : plan.legs) {
        std::printf("  %4.1fy  notional %7.4f  spread %6.1fbp\n", l.maturity, l.notional, l.spread * 1e4);
    }
    return 0;
}
