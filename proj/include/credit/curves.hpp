#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace credit {

/// Tenor/discount-factor pair of a base curve.
struct CurveNode {
    double tenor;
    double discount_factor;
};

/// Risk-free discount curve.
///
/// Log-linear interpolation of discount factors between nodes (piecewise
/// flat forwards) with an implicit node at (0, 1). Beyond the last node the
/// last segment's forward is held flat.
class BaseCurve {
public:
    explicit BaseCurve(std::span<const CurveNode> nodes) {
        if (nodes.empty()) throw DomainError("base curve needs at least one node");
        tenors_.reserve(nodes.size() + 1);
        log_df_.reserve(nodes.size() + 1);
        tenors_.push_back(0.0);
        log_df_.push_back(0.0);
        for (const auto& n : nodes) {
            if (!std::isfinite(n.tenor) || n.tenor <= tenors_.back()) {
                throw DomainError("base curve tenors must be positive and strictly increasing");
            }
            if (!(n.discount_factor > 0.0 && n.discount_factor <= 1.0)) {
                throw DomainError("discount factor outside (0, 1] at tenor " + std::to_string(n.tenor));
            }
            const double ld = std::log(n.discount_factor);
            if (ld > log_df_.back()) {
                throw DomainError("discount factors must be non-increasing (tenor " +
                                  std::to_string(n.tenor) + ")");
            }
            tenors_.push_back(n.tenor);
            log_df_.push_back(ld);
        }
        fwd_.resize(tenors_.size() - 1);
        for (std::size_t i = 0; i + 1 < tenors_.size(); ++i) {
            fwd_[i] = (log_df_[i] - log_df_[i + 1]) / (tenors_[i + 1] - tenors_[i]);
        }
    }

    explicit BaseCurve(const std::vector<CurveNode>& nodes)
        : BaseCurve(std::span<const CurveNode>(nodes)) {}

    /// Curve with df(t) = e^{-rate t}.
    static BaseCurve flat(double rate) {
        if (!(rate >= 0.0)) throw DomainError("flat base rate must be non-negative");
        const CurveNode n{1.0, std::exp(-rate)};
        return BaseCurve(std::span<const CurveNode>(&n, 1));
    }

    /// Curve from continuously compounded zero rates.
    static BaseCurve from_zero_rates(std::span<const double> tenors, std::span<const double> rates) {
        if (tenors.size() != rates.size()) throw DomainError("tenor/rate size mismatch");
        std::vector<CurveNode> nodes(tenors.size());
        for (std::size_t i = 0; i < tenors.size(); ++i) {
            nodes[i] = {tenors[i], std::exp(-rates[i] * tenors[i])};
        }
        return BaseCurve(nodes);
    }

    [[nodiscard]] double df(double t) const {
        if (!(t >= 0.0)) throw DomainError("df: t must be >= 0");
        return std::exp(log_df(t));
    }

    [[nodiscard]] double zero_rate(double t) const {
        if (!(t > 0.0)) throw DomainError("zero_rate: t must be > 0");
        return -log_df(t) / t;
    }

    /// Instantaneous forward; right limit at nodes.
    [[nodiscard]] double fwd_rate(double t) const {
        if (!(t >= 0.0)) throw DomainError("fwd_rate: t must be >= 0");
        return fwd_[segment(t)];
    }

    /// Coupon that prices a riskless bullet bond at par. T*q must be integral.
    [[nodiscard]] double par_yield(double maturity, int freq) const {
        if (freq <= 0) throw DomainError("par_yield: frequency must be positive");
        const double n_real = maturity * freq;
        const double n_round = std::round(n_real);
        if (!(maturity > 0.0) || std::abs(n_real - n_round) > 1e-9 || n_round < 1.0) {
            throw ScheduleError("par_yield: maturity " + std::to_string(maturity) +
                                " is not a whole number of periods");
        }
        const int n = static_cast<int>(n_round);
        double annuity = 0.0;
        for (int i = 1; i <= n; ++i) annuity += df(static_cast<double>(i) / freq);
        return freq * (1.0 - df(maturity)) / annuity;
    }

    /// Node tenors including the implicit zero node.
    [[nodiscard]] std::span<const double> tenors() const noexcept { return tenors_; }

    /// User nodes, without the implicit zero node.
    [[nodiscard]] std::vector<CurveNode> nodes() const {
        std::vector<CurveNode> out;
        out.reserve(tenors_.size() - 1);
        for (std::size_t i = 1; i < tenors_.size(); ++i) out.push_back({tenors_[i], std::exp(log_df_[i])});
        return out;
    }

private:
    // Index of the forward segment containing t (right-continuous).
    [[nodiscard]] std::size_t segment(double t) const noexcept {
        const auto it = std::upper_bound(tenors_.begin(), tenors_.end(), t);
        const auto idx = static_cast<std::size_t>(it - tenors_.begin());
        return std::min(idx == 0 ? 0 : idx - 1, fwd_.size() - 1);
    }

    [[nodiscard]] double log_df(double t) const noexcept {
        const std::size_t i = segment(t);
        return log_df_[i] - fwd_[i] * (t - tenors_[i]);
    }

    std::vector<double> tenors_;
    std::vector<double> log_df_;
    std::vector<double> fwd_;
};

} // namespace credit
