#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "bond.hpp"
#include "conventional.hpp"
#include "curves.hpp"
#include "detail/active_set_qp.hpp"
#include "detail/numerics.hpp"
#include "error.hpp"
#include "measures.hpp"
#include "pricing.hpp"
#include "splines.hpp"
#include "survival.hpp"

namespace credit {

/// Observed bond price with its regression weight input.
struct BondQuote {
    std::string id;
    BondSpec spec;
    double clean_price = 1.0;
    /// Spread duration in years; Z-spread duration is used when absent.
    std::optional<double> spread_duration;
    bool include = true;
};

/// Base-weight rule: 1/sqrt(SD) follows the objective, 1/SD^2 the prose variant.
enum class DurationWeighting { formula, prose };

struct OutlierConfig {
    bool enabled = true;
    int max_iter = 10;
    /// Tukey bisquare tuning constant.
    double tuning = 4.685;
    double tolerance = 1e-8;
    /// Floor on the robust residual scale, in price units.
    double min_scale = 1e-6;
};

/// 0.0025 to 0.25, sixteen points per decade.
inline std::vector<double> default_eta_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 32; ++i) g.push_back(0.0025 * std::pow(10.0, i / 16.0));
    return g;
}

struct FitConfig {
    int factors = 3;
    std::vector<Knot> knots;
    std::vector<double> eta_grid = default_eta_grid();
    /// Polish the best grid eta with a 1-D minimisation between its neighbours.
    bool refine_eta = true;
    /// Tenors of the monotonicity constraints; empty means 0.5-year steps to T_max + 5.
    std::vector<double> constraint_grid;
    double recovery = 0.4;
    DurationWeighting weighting = DurationWeighting::formula;
    OutlierConfig outlier;
    /// Floor for the strict inequalities, on rows scaled to unit max coefficient.
    double constraint_floor = 1e-8;

    void validate() const {
        if (factors < 1) throw DomainError("fit needs at least one factor");
        if (eta_grid.empty()) throw DomainError("eta grid is empty");
        for (double e : eta_grid) {
            if (!(e > 0.0)) throw DomainError("eta grid values must be positive");
        }
        if (!(recovery >= 0.0 && recovery < 1.0)) throw DomainError("recovery must lie in [0, 1)");
        if (outlier.max_iter < 0 || !(outlier.tuning > 0.0)) throw DomainError("invalid outlier settings");
    }
};

/// Regression row of one bond: PV = sum_k beta_k u_k + offset, v = PV_market - offset.
struct Regressors {
    std::vector<double> u;
    double v = 0.0;
    double offset = 0.0;
};

/// Regressors for the spline coefficients. The first-period recovery term
/// does not depend on beta and moves to the left-hand side.
inline Regressors build_regressors(const BondQuote& quote, const BaseCurve& base, const SplineBasis& basis,
                                   double recovery) {
    const auto& b = quote.spec;
    const auto ts = b.schedule();
    const double cq = b.coupon_payment();
    const double rr = recovery * (1.0 + b.coupon / (2.0 * b.freq));
    const std::size_t n = ts.size();
    Regressors out;
    out.u.assign(static_cast<std::size_t>(basis.size()), 0.0);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = base.df(ts[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double w = cq * z[i] - rr * (z[i] - z[i + 1]);
        for (int k = 1; k <= basis.size(); ++k) out.u[static_cast<std::size_t>(k - 1)] += basis.factor(k, ts[i]) * w;
    }
    const double w_last = z[n - 1] * (cq + 1.0 - rr);
    for (int k = 1; k <= basis.size(); ++k) out.u[static_cast<std::size_t>(k - 1)] += basis.factor(k, ts[n - 1]) * w_last;
    out.offset = rr * z[0];
    out.v = quote.clean_price + b.accrued_interest() - out.offset;
    return out;
}

/// Inequality constraint binding at the solution.
struct ActiveConstraint {
    std::string kind;  // "monotone" or "long_end"
    double tenor = 0.0;
};

struct FitResult {
    explicit FitResult(SurvivalCurve c) : curve(std::move(c)) {}

    SurvivalCurve curve;
    double eta = 0.0;
    double recovery = 0.4;
    std::vector<std::string> ids;
    std::vector<bool> included;
    std::vector<double> market_prices;
    std::vector<double> fitted_prices;
    /// market - fitted, clean price units
    std::vector<double> residuals;
    std::vector<double> das;
    std::vector<double> spread_durations;
    std::vector<double> outlier_weights;
    /// sqrt of the objective with weights normalised to sum to one
    double weighted_error = 0.0;
    std::vector<ActiveConstraint> active_constraints;
    /// Robust objective after each reweighting step, starting with the initial fit.
    std::vector<double> objective_history;
    int iterations = 0;
};

namespace detail {

struct PreparedQuotes {
    std::vector<const BondQuote*> all;
    std::vector<std::size_t> used;  // indices into all
    std::vector<double> base_weight;   // per used quote
    std::vector<double> durations;  // per quote in all
    double max_maturity = 0.0;
};

inline PreparedQuotes prepare_quotes(std::span<const BondQuote> quotes, const BaseCurve& base, const FitConfig& cfg) {
    PreparedQuotes p;
    for (std::size_t j = 0; j < quotes.size(); ++j) {
        const auto& q = quotes[j];
        q.spec.validate();
        if (!(q.clean_price > 0.0)) throw DomainError("quote " + q.id + ": clean price must be positive");
        double sd = 0.0;
        if (q.spread_duration) {
            sd = *q.spread_duration;
        } else {
            sd = z_spread_duration(q.spec, q.clean_price, base);
        }
        if (!(sd > 0.0)) throw DomainError("quote " + q.id + ": spread duration must be positive");
        p.all.push_back(&q);
        p.durations.push_back(sd);
        if (!q.include) continue;
        p.used.push_back(j);
        p.base_weight.push_back(cfg.weighting == DurationWeighting::formula ? 1.0 / std::sqrt(sd) : 1.0 / (sd * sd));
        p.max_maturity = std::max(p.max_maturity, q.spec.maturity);
    }
    if (static_cast<int>(p.used.size()) < cfg.factors) {
        throw InsufficientDataError("insufficient quotes: need at least " + std::to_string(cfg.factors) + ", got " +
                                    std::to_string(p.used.size()));
    }
    return p;
}

inline std::vector<double> constraint_tenors(const FitConfig& cfg, double max_maturity) {
    if (!cfg.constraint_grid.empty()) {
        auto g = cfg.constraint_grid;
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        if (!(g.front() > 0.0)) throw DomainError("constraint tenors must be positive");
        return g;
    }
    std::vector<double> g;
    const int n = static_cast<int>(std::ceil((max_maturity + 5.0) * 2.0 - 1e-9));
    for (int i = 1; i <= n; ++i) g.push_back(0.5 * i);
    return g;
}

inline double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    const double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lo + hi);
}

inline double bisquare_rho(double u, double c) {
    if (std::abs(u) >= c) return c * c / 6.0;
    const double a = 1.0 - (u / c) * (u / c);
    return c * c / 6.0 * (1.0 - a * a * a);
}

inline double bisquare_weight(double u, double c) {
    if (std::abs(u) >= c) return 0.0;
    const double a = 1.0 - (u / c) * (u / c);
    return a * a;
}

/// Column span of sqrt(W) U; names the quotes that add no new direction.
inline void check_rank(const Eigen::MatrixXd& u, const std::vector<std::string>& ids) {
    const Eigen::Index k = u.cols();
    const double scale = std::max(u.lpNorm<Eigen::Infinity>(), 1e-300);
    Eigen::MatrixXd acc(0, k);
    std::vector<std::string> collinear;
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < u.rows(); ++j) {
        Eigen::MatrixXd next(acc.rows() + 1, k);
        next << acc, u.row(j) / scale;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(next);
        qr.setThreshold(1e-10);
        if (qr.rank() > rank) {
            acc = next;
            rank = qr.rank();
        } else {
            collinear.push_back(ids[static_cast<std::size_t>(j)]);
        }
    }
    if (rank < k) {
        std::string names;
        for (const auto& c : collinear) names += (names.empty() ? "" : ", ") + c;
        throw RankDeficientError("rank-deficient design (rank " + std::to_string(rank) + " < " + std::to_string(k) +
                                     "); collinear quotes: " + (names.empty() ? "none" : names),
                                 collinear);
    }
}

struct Constraints {
    Eigen::MatrixXd eq;
    Eigen::VectorXd eq_rhs;
    Eigen::MatrixXd ineq;
    Eigen::VectorXd ineq_rhs;
    std::vector<ActiveConstraint> labels;
};

inline Eigen::RowVectorXd unit_max_row(const std::vector<double>& v) {
    Eigen::RowVectorXd r(static_cast<Eigen::Index>(v.size()));
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        r(static_cast<Eigen::Index>(i)) = v[i];
        m = std::max(m, std::abs(v[i]));
    }
    return m > 0.0 ? Eigen::RowVectorXd(r / m) : r;
}

inline Constraints build_constraints(const SplineBasis& basis, const std::vector<double>& tenors, double floor) {
    const Eigen::Index k = basis.size();
    Constraints c;
    c.eq.resize(1, k);
    const auto r0 = basis.row(0.0);
    for (Eigen::Index i = 0; i < k; ++i) c.eq(0, i) = r0[static_cast<std::size_t>(i)];
    c.eq_rhs = Eigen::VectorXd::Ones(1);
    const Eigen::Index m = static_cast<Eigen::Index>(tenors.size()) + 1;
    c.ineq.resize(m, k);
    c.ineq_rhs = Eigen::VectorXd::Constant(m, floor);
    Eigen::Index row = 0;
    for (double t : tenors) {
        auto s = basis.slope_row(t);
        for (double& x : s) x = -x / basis.eta();
        c.ineq.row(row++) = unit_max_row(s);
        c.labels.push_back({"monotone", t});
    }
    c.ineq.row(row) = unit_max_row(basis.row(tenors.back()));
    c.labels.push_back({"long_end", tenors.back()});
    return c;
}

struct EtaFit {
    Eigen::VectorXd beta;
    std::vector<double> outlier_weights;  // per used quote
    std::vector<double> residuals;        // per used quote
    std::vector<ActiveConstraint> active;
    std::vector<double> history;
    double weighted_error = 0.0;
    double horizon = 0.0;
    int iterations = 0;
};

inline EtaFit fit_at_eta(const PreparedQuotes& pq, const BaseCurve& base, const FitConfig& cfg, double eta) {
    const SplineBasis basis(eta, cfg.factors, cfg.knots);
    const std::size_t j_count = pq.used.size();
    const Eigen::Index k = basis.size();
    Eigen::MatrixXd u(static_cast<Eigen::Index>(j_count), k);
    Eigen::VectorXd v(static_cast<Eigen::Index>(j_count));
    std::vector<std::string> ids;
    for (std::size_t j = 0; j < j_count; ++j) {
        const auto& q = *pq.all[pq.used[j]];
        const auto reg = build_regressors(q, base, basis, cfg.recovery);
        for (Eigen::Index c = 0; c < k; ++c) u(static_cast<Eigen::Index>(j), c) = reg.u[static_cast<std::size_t>(c)];
        v(static_cast<Eigen::Index>(j)) = reg.v;
        ids.push_back(q.id);
    }
    check_rank(u, ids);
    Eigen::VectorXd d(static_cast<Eigen::Index>(j_count));
    for (std::size_t j = 0; j < j_count; ++j) d(static_cast<Eigen::Index>(j)) = pq.base_weight[j];
    d /= d.sum();

    auto tenors = constraint_tenors(cfg, pq.max_maturity);
    const double horizon = tenors.back();
    Eigen::VectorXd start = Eigen::VectorXd::Zero(k);
    start(0) = 1.0;

    for (int round = 0; round < 8; ++round) {
        const auto cons = build_constraints(basis, tenors, cfg.constraint_floor);

        auto solve = [&](const Eigen::VectorXd& w) {
            QpProblem p;
            p.hessian = u.transpose() * w.asDiagonal() * u;
            p.linear = u.transpose() * w.asDiagonal() * v;
            p.eq = cons.eq;
            p.eq_rhs = cons.eq_rhs;
            p.ineq = cons.ineq;
            p.ineq_rhs = cons.ineq_rhs;
            return solve_qp(p, start);
        };

        EtaFit fit;
        fit.horizon = horizon;
        Eigen::VectorXd w_out = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(j_count));
        auto sol = solve(d);
        Eigen::VectorXd resid = v - u * sol.x;

        if (cfg.outlier.enabled && cfg.outlier.max_iter > 0) {
            std::vector<double> r(resid.data(), resid.data() + resid.size());
            const double med = median(r);
            for (double& x : r) x = std::abs(x - med);
            const double scale = std::max(1.4826 * median(r), cfg.outlier.min_scale);
            const double c = cfg.outlier.tuning;
            auto objective = [&](const Eigen::VectorXd& e) {
                double s = 0.0;
                for (Eigen::Index j = 0; j < e.size(); ++j) s += d(j) * scale * scale * bisquare_rho(e(j) / scale, c);
                return s;
            };
            fit.history.push_back(objective(resid));
            for (int it = 0; it < cfg.outlier.max_iter; ++it) {
                Eigen::VectorXd w_new(w_out.size());
                for (Eigen::Index j = 0; j < w_new.size(); ++j) w_new(j) = bisquare_weight(resid(j) / scale, c);
                const Eigen::VectorXd w_eff = d.cwiseProduct(w_new);
                // keep the previous iterate if reweighting leaves too few effective quotes
                Eigen::MatrixXd wu = w_eff.cwiseSqrt().asDiagonal() * u;
                Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wu / std::max(wu.lpNorm<Eigen::Infinity>(), 1e-300));
                qr.setThreshold(1e-10);
                if (qr.rank() < k) break;
                const double change = (w_new - w_out).lpNorm<Eigen::Infinity>();
                w_out = w_new;
                sol = solve(w_eff);
                resid = v - u * sol.x;
                fit.history.push_back(objective(resid));
                fit.iterations = it + 1;
                if (change < cfg.outlier.tolerance) break;
            }
        }

        // validation grid: add any tenor where the curve would rise or vanish
        auto q_at = [&](double t) {
            double q = 0.0;
            for (int kk = 1; kk <= k; ++kk) q += sol.x(kk - 1) * basis.factor(kk, t);
            return q;
        };
        auto slope_at = [&](double t) {
            double s = 0.0;
            for (int kk = 1; kk <= k; ++kk) s += sol.x(kk - 1) * basis.factor_slope(kk, t);
            return s;
        };
        std::vector<double> violations;
        auto add = [&](double t) {
            if (std::find(tenors.begin(), tenors.end(), t) == tenors.end() &&
                std::find(violations.begin(), violations.end(), t) == violations.end()) {
                violations.push_back(t);
            }
        };
        const int n_val = static_cast<int>(std::floor(horizon / validation_step + 1e-9));
        double prev_q = 1.0;
        for (int i = 0; i <= n_val; ++i) {
            const double t = i * validation_step;
            const double q = q_at(t);
            if (!(q > 0.0) || slope_at(t) > 0.0) add(t);
            if (i > 0 && q > prev_q) {
                // rise between grid points: constrain the steepest interior point
                double worst_t = t;
                double worst_s = -std::numeric_limits<double>::infinity();
                for (int m = 1; m < 16; ++m) {
                    const double tm = t - validation_step + m * validation_step / 16.0;
                    const double sm = slope_at(tm);
                    if (sm > worst_s) {
                        worst_s = sm;
                        worst_t = tm;
                    }
                }
                add(worst_t);
            }
            prev_q = q;
        }
        if (!violations.empty()) {
            tenors.insert(tenors.end(), violations.begin(), violations.end());
            std::sort(tenors.begin(), tenors.end());
            continue;
        }

        fit.beta = sol.x;
        fit.outlier_weights.assign(w_out.data(), w_out.data() + w_out.size());
        fit.residuals.assign(resid.data(), resid.data() + resid.size());
        for (int a : sol.active) fit.active.push_back(cons.labels[static_cast<std::size_t>(a)]);
        const Eigen::VectorXd w_final = d.cwiseProduct(w_out);
        const double wsum = w_final.sum();
        fit.weighted_error = wsum > 0.0 ? std::sqrt(w_final.dot(resid.cwiseProduct(resid)) / wsum) : 0.0;
        return fit;
    }
    throw FitError("constraint augmentation did not settle at eta=" + std::to_string(eta));
}

} // namespace detail

/// Assemble the result for a given eta.
inline FitResult fit_survival_at_eta(std::span<const BondQuote> quotes, const BaseCurve& base, const FitConfig& cfg,
                                     double eta) {
    cfg.validate();
    const auto pq = detail::prepare_quotes(quotes, base, cfg);
    const auto fit = detail::fit_at_eta(pq, base, cfg, eta);
    std::vector<double> beta(fit.beta.data(), fit.beta.data() + fit.beta.size());
    std::optional<SurvivalCurve> curve;
    try {
        curve.emplace(SurvivalCurve::spline(SplineBasis(eta, cfg.factors, cfg.knots), beta, fit.horizon));
    } catch (const DomainError& e) {
        throw FitError(std::string("fitted curve is not a valid survival curve: ") + e.what());
    }
    FitResult r(*curve);
    r.eta = eta;
    r.recovery = cfg.recovery;
    r.weighted_error = fit.weighted_error;
    r.active_constraints = fit.active;
    r.objective_history = fit.history;
    r.iterations = fit.iterations;
    r.spread_durations = pq.durations;
    std::size_t used = 0;
    for (std::size_t j = 0; j < pq.all.size(); ++j) {
        const auto& q = *pq.all[j];
        r.ids.push_back(q.id);
        r.included.push_back(q.include);
        r.market_prices.push_back(q.clean_price);
        const double fitted = fitted_price(q.spec, base, r.curve, cfg.recovery);
        r.fitted_prices.push_back(fitted);
        r.residuals.push_back(q.clean_price - fitted);
        double d = std::numeric_limits<double>::quiet_NaN();
        try {
            d = das(q.spec, q.clean_price, base, r.curve, cfg.recovery);
        } catch (const ConvergenceError&) {
        }
        r.das.push_back(d);
        if (q.include) {
            r.outlier_weights.push_back(fit.outlier_weights[used++]);
        } else {
            r.outlier_weights.push_back(0.0);
        }
    }
    return r;
}

/// Fit a spline survival curve to bond prices; eta chosen by lowest weighted error.
inline FitResult fit_survival(std::span<const BondQuote> quotes, const BaseCurve& base, const FitConfig& cfg = {}) {
    cfg.validate();
    const auto pq = detail::prepare_quotes(quotes, base, cfg);
    auto grid = cfg.eta_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::optional<std::string> first_error;
    std::optional<RankDeficientError> rank_error;
    auto score = [&](double eta) {
        try {
            return detail::fit_at_eta(pq, base, cfg, eta).weighted_error;
        } catch (const RankDeficientError& e) {
            if (!rank_error) rank_error.emplace(e);
        } catch (const Error& e) {
            if (!first_error) first_error = e.what();
        }
        return std::numeric_limits<double>::infinity();
    };

    std::vector<double> errors(grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        errors[i] = score(grid[i]);
        if (errors[i] < errors[best]) best = i;
    }
    if (!std::isfinite(errors[best])) {
        if (rank_error) throw *rank_error;
        throw FitError("no eta on the grid produced a fit: " + first_error.value_or("unknown error"));
    }
    double eta = grid[best];
    if (cfg.refine_eta && grid.size() > 1) {
        const double lo = grid[best == 0 ? 0 : best - 1];
        const double hi = grid[std::min(best + 1, grid.size() - 1)];
        std::uintmax_t iters = 200;
        // long double bookkeeping lifts the half-precision cap on the eta tolerance
        const auto [x, fx] = boost::math::tools::brent_find_minima(
            [&](long double e) { return static_cast<long double>(score(static_cast<double>(e))); },
            static_cast<long double>(lo), static_cast<long double>(hi), std::numeric_limits<long double>::digits,
            iters);
        if (fx < errors[best]) eta = static_cast<double>(x);
    }
    return fit_survival_at_eta(quotes, base, cfg, eta);
}

/// CDS par spread quote.
struct CdsQuote {
    double maturity = 0.0;
    double par_spread = 0.0;
};

/// Piecewise-constant hazard bootstrapped so each quote reprices at par.
inline SurvivalCurve calibrate_from_cds(std::span<const CdsQuote> quotes, const BaseCurve& base, double recovery,
                                        int freq = 4) {
    detail::check_recovery(recovery);
    if (quotes.empty()) throw InsufficientDataError("no CDS quotes");
    std::vector<HazardSegment> segments;
    double prev = 0.0;
    for (const auto& q : quotes) {
        if (!(q.maturity > prev)) throw DomainError("CDS maturities must be positive and strictly increasing");
        if (!(q.par_spread > 0.0)) throw DomainError("CDS spreads must be positive");
        prev = q.maturity;
        auto gap = [&](double h) {
            auto segs = segments;
            segs.push_back({q.maturity, h});
            return cds_par_spread(q.maturity, freq, base, SurvivalCurve::piecewise_hazard(std::move(segs)), recovery) -
                   q.par_spread;
        };
        const double hi = 50.0;
        if (gap(0.0) > 0.0 || gap(hi) < 0.0) {
            throw ArbitrageError("no non-negative hazard reprices the CDS quote at maturity " +
                                     std::to_string(q.maturity),
                                 q.maturity);
        }
        const double h = detail::bracketed_root(gap, 0.0, hi, "calibrate_from_cds");
        segments.push_back({q.maturity, h});
    }
    return SurvivalCurve::piecewise_hazard(std::move(segments));
}

struct ImpliedRecovery {
    double recovery = 0.0;
    bool identified = true;
    /// (R, weighted error) for every R scanned.
    std::vector<std::pair<double, double>> profile;
    FitResult fit;
};

/// True when the profile is too flat to identify recovery.
inline bool recovery_profile_flat(std::span<const std::pair<double, double>> profile, double threshold = 1e-6) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [r, e] : profile) {
        if (!std::isfinite(e)) continue;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return !(hi - lo >= threshold);
}

/// Second-stage scan of recovery in [0, 0.9] minimising the weighted error.
inline ImpliedRecovery implied_recovery(std::span<const BondQuote> quotes, const BaseCurve& base,
                                        const FitConfig& cfg = {}, double step = 0.01,
                                        double flat_threshold = 1e-6) {
    std::size_t used = 0;
    double t_lo = std::numeric_limits<double>::infinity();
    double t_hi = 0.0;
    for (const auto& q : quotes) {
        if (!q.include) continue;
        ++used;
        t_lo = std::min(t_lo, q.spec.maturity);
        t_hi = std::max(t_hi, q.spec.maturity);
    }
    if (used < 6 || t_hi - t_lo < 5.0) {
        throw InsufficientDataError("implied recovery needs at least 6 quotes spanning 5 years of maturity");
    }
    std::vector<std::pair<double, double>> profile;
    double best_r = cfg.recovery;
    double best_e = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(std::floor(0.9 / step + 1e-9));
    for (int i = 0; i <= n; ++i) {
        FitConfig c = cfg;
        c.recovery = i * step;
        double e = std::numeric_limits<double>::infinity();
        try {
            e = fit_survival(quotes, base, c).weighted_error;
        } catch (const FitError&) {
        }
        profile.emplace_back(c.recovery, e);
        if (e < best_e) {
            best_e = e;
            best_r = c.recovery;
        }
    }
    const bool flat = recovery_profile_flat(profile, flat_threshold);
    const double r = flat ? cfg.recovery : best_r;
    FitConfig c = cfg;
    c.recovery = r;
    return ImpliedRecovery{r, !flat, std::move(profile), fit_survival(quotes, base, c)};
}

} // namespace credit
