#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace credit {

/// Knot attached to a spline factor with index >= 4.
struct Knot {
    int factor;
    double tenor;
};

/// Exponential spline basis Phi_k(t | eta).
///
/// Factors 1..3 are e^{-k eta t}. Each factor k >= 4 starts at its knot T and
/// equals 1/3 - e^{-eta x} + e^{-2 eta x} - e^{-3 eta x}/3 with x = t - T,
/// which vanishes with its first derivative at the knot.
class SplineBasis {
public:
    explicit SplineBasis(double eta, int factors = 3, std::vector<Knot> knots = {})
        : eta_(eta), factors_(factors), knot_tenor_(static_cast<std::size_t>(std::max(factors, 0)), 0.0) {
        if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("spline eta must be positive");
        if (factors < 1) throw DomainError("spline needs at least one factor");
        std::vector<bool> seen(static_cast<std::size_t>(factors), false);
        for (const auto& k : knots) {
            if (k.factor < 4 || k.factor > factors) {
                throw DomainError("knot factor index " + std::to_string(k.factor) + " out of range");
            }
            if (!(k.tenor > 0.0)) throw DomainError("knot tenor must be positive");
            if (seen[static_cast<std::size_t>(k.factor - 1)]) {
                throw DomainError("duplicate knot for factor " + std::to_string(k.factor));
            }
            seen[static_cast<std::size_t>(k.factor - 1)] = true;
            knot_tenor_[static_cast<std::size_t>(k.factor - 1)] = k.tenor;
        }
        for (int k = 4; k <= factors; ++k) {
            if (!seen[static_cast<std::size_t>(k - 1)]) {
                throw DomainError("factor " + std::to_string(k) + " requires a knot");
            }
        }
        for (int k = 5; k <= factors; ++k) {
            if (knot_tenor_[static_cast<std::size_t>(k - 1)] <= knot_tenor_[static_cast<std::size_t>(k - 2)]) {
                throw DomainError("knot tenors must be strictly increasing");
            }
        }
        for (int k = 4; k <= factors; ++k) knots_.push_back({k, knot_tenor_[static_cast<std::size_t>(k - 1)]});
    }

    [[nodiscard]] double eta() const noexcept { return eta_; }
    [[nodiscard]] int size() const noexcept { return factors_; }
    [[nodiscard]] const std::vector<Knot>& knots() const noexcept { return knots_; }

    /// Knot tenor of factor k, empty for the knot-free factors.
    [[nodiscard]] std::optional<double> knot_of(int k) const {
        check_index(k);
        if (k <= 3) return std::nullopt;
        return knot_tenor_[static_cast<std::size_t>(k - 1)];
    }

    [[nodiscard]] double factor(int k, double t) const {
        check_index(k);
        if (!(t >= 0.0)) throw DomainError("spline factor: t must be >= 0");
        if (k <= 3) return std::exp(-k * eta_ * t);
        const double x = t - knot_tenor_[static_cast<std::size_t>(k - 1)];
        if (x <= 0.0) return 0.0;
        const double e = std::exp(-eta_ * x);
        return 1.0 / 3.0 - e + e * e - e * e * e / 3.0;
    }

    /// d Phi_k / dt.
    [[nodiscard]] double factor_slope(int k, double t) const {
        check_index(k);
        if (!(t >= 0.0)) throw DomainError("spline factor: t must be >= 0");
        if (k <= 3) return -k * eta_ * std::exp(-k * eta_ * t);
        const double x = t - knot_tenor_[static_cast<std::size_t>(k - 1)];
        if (x <= 0.0) return 0.0;
        const double e = std::exp(-eta_ * x);
        return eta_ * (e - 2.0 * e * e + e * e * e);
    }

    [[nodiscard]] std::vector<double> row(double t) const {
        std::vector<double> r(static_cast<std::size_t>(factors_));
        for (int k = 1; k <= factors_; ++k) r[static_cast<std::size_t>(k - 1)] = factor(k, t);
        return r;
    }

    [[nodiscard]] std::vector<double> slope_row(double t) const {
        std::vector<double> r(static_cast<std::size_t>(factors_));
        for (int k = 1; k <= factors_; ++k) r[static_cast<std::size_t>(k - 1)] = factor_slope(k, t);
        return r;
    }

private:
    void check_index(int k) const {
        if (k < 1 || k > factors_) throw DomainError("spline factor index " + std::to_string(k) + " out of range");
    }

    double eta_;
    int factors_;
    std::vector<double> knot_tenor_;
    std::vector<Knot> knots_;
};

} // namespace credit
