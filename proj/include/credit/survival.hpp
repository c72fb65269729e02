#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "splines.hpp"

namespace credit {

/// Constant hazard on the interval ending at `tenor` (and beyond, for the last one).
struct HazardSegment {
    double tenor;
    double hazard;
};

/// Term c e^{-rate (u - a)} of a locally exponential survival curve.
struct ExpTerm {
    double coeff;
    double rate;
};

/// Spacing of the grid on which curve validity is checked.
inline constexpr double validation_step = 0.25;

/// Survival probability term structure Q(t).
///
/// Either an exponential spline sum_k beta_k Phi_k(t) up to a horizon, with
/// the horizon hazard held constant beyond it, or a piecewise-constant hazard.
class SurvivalCurve {
public:
    struct Spline {
        SplineBasis basis;
        std::vector<double> beta;
        double horizon;
    };

    struct PiecewiseHazard {
        std::vector<HazardSegment> segments;
    };

    static SurvivalCurve spline(SplineBasis basis, std::vector<double> beta, double horizon = 30.0) {
        if (static_cast<int>(beta.size()) != basis.size()) {
            throw DomainError("spline coefficient count does not match the basis");
        }
        if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("spline horizon must be positive");
        for (double b : beta) {
            if (!std::isfinite(b)) throw DomainError("spline coefficient not finite");
        }
        SurvivalCurve sc(Spline{std::move(basis), std::move(beta), horizon});
        sc.validate_spline();
        return sc;
    }

    static SurvivalCurve piecewise_hazard(std::vector<HazardSegment> segments) {
        if (segments.empty()) throw DomainError("piecewise hazard curve needs at least one segment");
        double prev = 0.0;
        for (const auto& s : segments) {
            if (!(s.tenor > prev) || !std::isfinite(s.tenor)) {
                throw DomainError("hazard segment tenors must be positive and strictly increasing");
            }
            if (!(s.hazard >= 0.0) || !std::isfinite(s.hazard)) {
                throw DomainError("hazard must be finite and non-negative (segment ending " +
                                  std::to_string(s.tenor) + ")");
            }
            prev = s.tenor;
        }
        return SurvivalCurve(PiecewiseHazard{std::move(segments)});
    }

    static SurvivalCurve flat_hazard(double hazard) {
        return piecewise_hazard({HazardSegment{1.0, hazard}});
    }

    [[nodiscard]] bool is_spline() const noexcept { return std::holds_alternative<Spline>(rep_); }
    [[nodiscard]] const Spline* as_spline() const noexcept { return std::get_if<Spline>(&rep_); }
    [[nodiscard]] const PiecewiseHazard* as_piecewise() const noexcept { return std::get_if<PiecewiseHazard>(&rep_); }

    /// Last tenor with its own shape; constant hazard applies beyond it.
    [[nodiscard]] double horizon() const noexcept {
        if (const auto* s = as_spline()) return s->horizon;
        return std::get<PiecewiseHazard>(rep_).segments.back().tenor;
    }

    [[nodiscard]] double survival(double t) const {
        if (!(t >= 0.0)) throw DomainError("survival: t must be >= 0");
        if (const auto* s = as_spline()) {
            if (t <= s->horizon) return spline_value(*s, t);
            return q_horizon_ * std::exp(-h_horizon_ * (t - s->horizon));
        }
        return std::exp(-cumulative_hazard(t));
    }

    /// -d ln Q / dt; right limit at hazard breaks.
    [[nodiscard]] double hazard(double t) const {
        if (!(t >= 0.0)) throw DomainError("hazard: t must be >= 0");
        if (const auto* s = as_spline()) {
            if (t >= s->horizon) return h_horizon_;
            return spline_hazard(*s, t);
        }
        const auto& seg = std::get<PiecewiseHazard>(rep_).segments;
        return seg[segment_index(t)].hazard;
    }

    [[nodiscard]] double default_prob(double t1, double t2) const {
        if (!(t1 >= 0.0) || t1 > t2) throw DomainError("default_prob: need 0 <= t1 <= t2");
        return survival(t1) - survival(t2);
    }

    [[nodiscard]] double cumulative_default_prob(double t) const { return default_prob(0.0, t); }

    /// Q(T) / Q(t).
    [[nodiscard]] double fwd_survival(double t, double maturity) const {
        if (!(t >= 0.0) || t > maturity) throw DomainError("fwd_survival: need 0 <= t <= T");
        const double qt = survival(t);
        if (!(qt > 0.0)) throw DomainError("fwd_survival: Q(t) is zero");
        return survival(maturity) / qt;
    }

    /// Zero-coupon zero-recovery spread, the average hazard to T.
    [[nodiscard]] double zz_spread(double maturity) const {
        if (!(maturity > 0.0)) throw DomainError("zz_spread: T must be > 0");
        return -std::log(survival(maturity)) / maturity;
    }

    /// Forward ZZ-spread, equal to the hazard rate.
    [[nodiscard]] double fwd_zz_spread(double t) const { return hazard(t); }

    /// Tenors where the local exponential representation changes.
    [[nodiscard]] std::vector<double> breakpoints() const {
        std::vector<double> out;
        if (const auto* s = as_spline()) {
            for (const auto& k : s->basis.knots()) {
                if (k.tenor < s->horizon) out.push_back(k.tenor);
            }
            out.push_back(s->horizon);
        } else {
            for (const auto& seg : std::get<PiecewiseHazard>(rep_).segments) out.push_back(seg.tenor);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Q(u) = sum_j c_j e^{-rate_j (u - a)} for u from a up to the next breakpoint.
    [[nodiscard]] std::vector<ExpTerm> local_terms(double a) const {
        std::vector<ExpTerm> out;
        if (const auto* s = as_spline()) {
            if (a >= s->horizon) {
                out.push_back({q_horizon_ * std::exp(-h_horizon_ * (a - s->horizon)), h_horizon_});
                return out;
            }
            const double eta = s->basis.eta();
            for (int k = 1; k <= s->basis.size(); ++k) {
                const double b = s->beta[static_cast<std::size_t>(k - 1)];
                if (b == 0.0) continue;
                if (k <= 3) {
                    out.push_back({b * std::exp(-k * eta * a), k * eta});
                    continue;
                }
                const double x = a - *s->basis.knot_of(k);
                if (x < 0.0) continue;
                const double e = std::exp(-eta * x);
                out.push_back({b / 3.0, 0.0});
                out.push_back({-b * e, eta});
                out.push_back({b * e * e, 2.0 * eta});
                out.push_back({-b * e * e * e / 3.0, 3.0 * eta});
            }
            return out;
        }
        out.push_back({survival(a), hazard(a)});
        return out;
    }

private:
    explicit SurvivalCurve(Spline s) : rep_(std::move(s)) {}

    explicit SurvivalCurve(PiecewiseHazard p) : rep_(std::move(p)) {
        const auto& seg = std::get<PiecewiseHazard>(rep_).segments;
        cum_.resize(seg.size());
        double prev = 0.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < seg.size(); ++i) {
            acc += seg[i].hazard * (seg[i].tenor - prev);
            cum_[i] = acc;
            prev = seg[i].tenor;
        }
    }

    static double spline_value(const Spline& s, double t) {
        double q = 0.0;
        for (int k = 1; k <= s.basis.size(); ++k) q += s.beta[static_cast<std::size_t>(k - 1)] * s.basis.factor(k, t);
        return q;
    }

    static double spline_slope(const Spline& s, double t) {
        double d = 0.0;
        for (int k = 1; k <= s.basis.size(); ++k) d += s.beta[static_cast<std::size_t>(k - 1)] * s.basis.factor_slope(k, t);
        return d;
    }

    static double spline_hazard(const Spline& s, double t) {
        const double q = spline_value(s, t);
        if (!(q > 0.0)) throw DomainError("hazard: survival probability not positive at t=" + std::to_string(t));
        return -spline_slope(s, t) / q;
    }

    void validate_spline() {
        const auto& s = std::get<Spline>(rep_);
        const double q0 = spline_value(s, 0.0);
        if (std::abs(q0 - 1.0) > 1e-12) {
            throw DomainError("spline coefficients must give Q(0) = 1 (got " + std::to_string(q0) + ")");
        }
        if (spline_hazard(s, 0.0) < 0.0) throw DomainError("negative hazard at t=0");
        double prev_q = 1.0;
        const int n = static_cast<int>(std::floor(s.horizon / validation_step + 1e-9));
        for (int i = 1; i <= n + 1; ++i) {
            const double t = i <= n ? i * validation_step : s.horizon;
            const double q = spline_value(s, t);
            if (!(q > 0.0)) throw DomainError("survival probability not positive at t=" + std::to_string(t));
            if (q > prev_q + 1e-15) throw DomainError("survival probability increases at t=" + std::to_string(t));
            if (spline_hazard(s, t) < 0.0) throw DomainError("negative hazard at t=" + std::to_string(t));
            prev_q = q;
        }
        q_horizon_ = spline_value(s, s.horizon);
        h_horizon_ = spline_hazard(s, s.horizon);
    }

    [[nodiscard]] std::size_t segment_index(double t) const noexcept {
        const auto& seg = std::get<PiecewiseHazard>(rep_).segments;
        std::size_t i = 0;
        while (i + 1 < seg.size() && t >= seg[i].tenor) ++i;
        return i;
    }

    [[nodiscard]] double cumulative_hazard(double t) const noexcept {
        const auto& seg = std::get<PiecewiseHazard>(rep_).segments;
        const std::size_t i = segment_index(t);
        const double start = i == 0 ? 0.0 : seg[i - 1].tenor;
        const double base = i == 0 ? 0.0 : cum_[i - 1];
        return base + seg[i].hazard * (t - start);
    }

    std::variant<Spline, PiecewiseHazard> rep_;
    std::vector<double> cum_;
    double q_horizon_ = 1.0;
    double h_horizon_ = 0.0;
};

} // namespace credit
