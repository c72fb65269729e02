#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "basis_hedging.hpp"
#include "calibration.hpp"
#include "curves.hpp"
#include "error.hpp"
#include "measures.hpp"
#include "survival.hpp"

namespace credit::io {

using json = nlohmann::json;

/// Shortest text that parses back to the same double.
inline std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// One data row with its 1-based line number, fields keyed by header name.
struct Row {
    std::size_t line = 0;
    std::map<std::string, std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    [[nodiscard]] bool has(const std::string& col) const {
        return std::find(header.begin(), header.end(), col) != header.end();
    }
};

/// Comma-separated table with a header line; blank lines and '#' comments are skipped.
inline Table read_table(std::istream& in, const std::string& name) {
    Table t;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto cells = split(s);
        if (t.header.empty()) {
            t.header = std::move(cells);
            for (const auto& h : t.header) {
                if (h.empty()) throw ParseError(name + " line " + std::to_string(n) + ": empty header field", n);
            }
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw ParseError(name + " line " + std::to_string(n) + ": expected " + std::to_string(t.header.size()) +
                                 " fields, got " + std::to_string(cells.size()),
                             n);
        }
        Row r;
        r.line = n;
        for (std::size_t i = 0; i < cells.size(); ++i) r.fields[t.header[i]] = std::move(cells[i]);
        t.rows.push_back(std::move(r));
    }
    if (t.header.empty()) throw ParseError(name + ": missing header line", 0);
    return t;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingInputError("cannot open input file " + path);
    return in;
}

inline double number(const Row& r, const std::string& col, const std::string& name) {
    const auto& s = r.fields.at(col);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        throw ParseError(name + " line " + std::to_string(r.line) + ": field '" + col + "' is not a number: '" + s +
                             "'",
                         r.line);
    }
    return v;
}

inline void require_columns(const Table& t, const std::vector<std::string>& cols, const std::string& name) {
    for (const auto& c : cols) {
        if (!t.has(c)) throw ParseError(name + ": missing column '" + c + "'", 1);
    }
}

[[noreturn]] inline void bad_row(const Row& r, const std::string& name, const std::string& why) {
    throw ParseError(name + " line " + std::to_string(r.line) + ": " + why, r.line);
}

} // namespace detail

/// Base curve from `tenor_years,zero_rate` or `tenor_years,discount_factor`.
inline BaseCurve read_base_curve(std::istream& in, const std::string& name = "base curve") {
    const auto t = detail::read_table(in, name);
    detail::require_columns(t, {"tenor_years"}, name);
    const bool zero = t.has("zero_rate");
    const bool disc = t.has("discount_factor");
    if (zero == disc) throw ParseError(name + ": need exactly one of zero_rate or discount_factor", 1);
    if (t.rows.empty()) throw ParseError(name + ": no curve nodes", 0);
    std::vector<CurveNode> nodes;
    double prev = 0.0;
    for (const auto& r : t.rows) {
        const double tenor = detail::number(r, "tenor_years", name);
        if (!(tenor > prev)) detail::bad_row(r, name, "tenors must be positive and strictly increasing");
        prev = tenor;
        const double v = detail::number(r, zero ? "zero_rate" : "discount_factor", name);
        const double df = zero ? std::exp(-v * tenor) : v;
        if (!(df > 0.0 && df <= 1.0)) detail::bad_row(r, name, "discount factor outside (0, 1]");
        if (!nodes.empty() && df > nodes.back().discount_factor) {
            detail::bad_row(r, name, "discount factors must be non-increasing");
        }
        nodes.push_back({tenor, df});
    }
    return BaseCurve(nodes);
}

inline BaseCurve read_base_curve_file(const std::string& path) {
    auto in = detail::open_input(path);
    return read_base_curve(in, path);
}

/// Bond quotes: `id,coupon,freq,maturity_years,accrued_years,clean_price[,spread_duration][,include]`.
inline std::vector<BondQuote> read_bond_quotes(std::istream& in, const std::string& name = "bond quotes") {
    const auto t = detail::read_table(in, name);
    detail::require_columns(t, {"id", "coupon", "freq", "maturity_years", "accrued_years", "clean_price"}, name);
    std::vector<BondQuote> out;
    for (const auto& r : t.rows) {
        BondQuote q;
        q.id = r.fields.at("id");
        if (q.id.empty()) detail::bad_row(r, name, "empty id");
        const double freq = detail::number(r, "freq", name);
        if (freq != 1.0 && freq != 2.0 && freq != 4.0) detail::bad_row(r, name, "freq must be 1, 2 or 4");
        q.spec = BondSpec{detail::number(r, "coupon", name), static_cast<int>(freq),
                          detail::number(r, "maturity_years", name), detail::number(r, "accrued_years", name)};
        try {
            q.spec.validate();
        } catch (const DomainError& e) {
            detail::bad_row(r, name, e.what());
        }
        q.clean_price = detail::number(r, "clean_price", name);
        if (!(q.clean_price > 0.0)) detail::bad_row(r, name, "clean_price must be positive");
        if (t.has("spread_duration") && !r.fields.at("spread_duration").empty()) {
            q.spread_duration = detail::number(r, "spread_duration", name);
            if (!(*q.spread_duration > 0.0)) detail::bad_row(r, name, "spread_duration must be positive");
        }
        if (t.has("include")) {
            const auto& v = r.fields.at("include");
            if (v == "1" || v == "true") {
                q.include = true;
            } else if (v == "0" || v == "false") {
                q.include = false;
            } else {
                detail::bad_row(r, name, "include must be 0/1/true/false");
            }
        }
        out.push_back(std::move(q));
    }
    return out;
}

inline std::vector<BondQuote> read_bond_quotes_file(const std::string& path) {
    auto in = detail::open_input(path);
    return read_bond_quotes(in, path);
}

/// CDS quotes: `maturity_years,par_spread_bp`.
inline std::vector<CdsQuote> read_cds_quotes(std::istream& in, const std::string& name = "CDS quotes") {
    const auto t = detail::read_table(in, name);
    detail::require_columns(t, {"maturity_years", "par_spread_bp"}, name);
    std::vector<CdsQuote> out;
    for (const auto& r : t.rows) {
        const double m = detail::number(r, "maturity_years", name);
        const double s = detail::number(r, "par_spread_bp", name);
        if (!(m > 0.0)) detail::bad_row(r, name, "maturity must be positive");
        if (!(s > 0.0)) detail::bad_row(r, name, "spread must be positive");
        out.push_back({m, s * 1e-4});
    }
    return out;
}

inline std::vector<CdsQuote> read_cds_quotes_file(const std::string& path) {
    auto in = detail::open_input(path);
    return read_cds_quotes(in, path);
}

inline json curve_to_json(const SurvivalCurve& sc) {
    json j;
    if (const auto* s = sc.as_spline()) {
        j["type"] = "spline";
        j["eta"] = s->basis.eta();
        j["factors"] = s->basis.size();
        j["beta"] = s->beta;
        j["horizon"] = s->horizon;
        j["knots"] = json::array();
        for (const auto& k : s->basis.knots()) j["knots"].push_back({{"factor", k.factor}, {"tenor", k.tenor}});
    } else {
        j["type"] = "piecewise_hazard";
        j["segments"] = json::array();
        for (const auto& seg : sc.as_piecewise()->segments) {
            j["segments"].push_back({{"tenor", seg.tenor}, {"hazard", seg.hazard}});
        }
    }
    return j;
}

inline SurvivalCurve curve_from_json(const json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "spline") {
            std::vector<Knot> knots;
            if (j.contains("knots")) {
                for (const auto& k : j.at("knots")) knots.push_back({k.at("factor").get<int>(), k.at("tenor").get<double>()});
            }
            const auto beta = j.at("beta").get<std::vector<double>>();
            const int factors = j.contains("factors") ? j.at("factors").get<int>() : static_cast<int>(beta.size());
            const double horizon = j.contains("horizon") ? j.at("horizon").get<double>() : 30.0;
            return SurvivalCurve::spline(SplineBasis(j.at("eta").get<double>(), factors, knots), beta, horizon);
        }
        if (type == "piecewise_hazard") {
            std::vector<HazardSegment> segs;
            for (const auto& s : j.at("segments")) segs.push_back({s.at("tenor").get<double>(), s.at("hazard").get<double>()});
            return SurvivalCurve::piecewise_hazard(std::move(segs));
        }
        throw ParseError("curve JSON: unknown type '" + type + "'", 0);
    } catch (const json::exception& e) {
        throw ParseError(std::string("curve JSON: ") + e.what(), 0);
    } catch (const DomainError& e) {
        throw ParseError(std::string("curve JSON: invalid curve: ") + e.what(), 0);
    }
}

inline SurvivalCurve read_curve_file(const std::string& path) {
    auto in = detail::open_input(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
    return curve_from_json(j);
}

inline json hedge_plan_to_json(const HedgePlan& plan) {
    json legs = json::array();
    for (const auto& l : plan.legs) {
        legs.push_back({{"maturity", l.maturity}, {"notional", l.notional}, {"spread_bp", l.spread * 1e4}});
    }
    return {{"legs", legs}, {"cost_bp", plan.cost * 1e4}, {"residual_npv", plan.residual_npv}};
}

inline json diagnostics_to_json(const FitResult& fit) {
    json active = json::array();
    for (const auto& a : fit.active_constraints) active.push_back({{"kind", a.kind}, {"tenor", a.tenor}});
    return {{"weighted_error", fit.weighted_error},
            {"eta", fit.eta},
            {"recovery", fit.recovery},
            {"active_constraints", active},
            {"objective_history", fit.objective_history},
            {"outlier_iterations", fit.iterations}};
}

/// Rows of id, market, fitted, residual, das_bp, outlier_weight.
inline void write_residuals_csv(std::ostream& out, const FitResult& fit) {
    out << "id,market,fitted,residual,das_bp,outlier_weight\n";
    for (std::size_t j = 0; j < fit.ids.size(); ++j) {
        out << fit.ids[j] << ',' << format_double(fit.market_prices[j]) << ',' << format_double(fit.fitted_prices[j])
            << ',' << format_double(fit.residuals[j]) << ',' << format_double(fit.das[j] * 1e4) << ','
            << format_double(fit.outlier_weights[j]) << '\n';
    }
}

inline json residuals_to_json(const FitResult& fit) {
    json rows = json::array();
    for (std::size_t j = 0; j < fit.ids.size(); ++j) {
        rows.push_back({{"id", fit.ids[j]},
                        {"market", fit.market_prices[j]},
                        {"fitted", fit.fitted_prices[j]},
                        {"residual", fit.residuals[j]},
                        {"das_bp", fit.das[j] * 1e4},
                        {"outlier_weight", fit.outlier_weights[j]}});
    }
    return rows;
}

inline std::string ccp_column(double coupon) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ccp_%g", coupon * 100.0);
    return buf;
}

inline void write_report_csv(std::ostream& out, const TermStructureReport& rep) {
    out << "tenor,Q,hazard,zz_spread,par_coupon,p_spread";
    for (double c : rep.ccp_coupons) out << ',' << ccp_column(c);
    out << ",bcds\n";
    for (const auto& r : rep.rows) {
        out << format_double(r.tenor) << ',' << format_double(r.survival) << ',' << format_double(r.hazard) << ','
            << format_double(r.zz_spread) << ',' << format_double(r.par_coupon) << ',' << format_double(r.p_spread);
        for (double p : r.ccp) out << ',' << format_double(p);
        out << ',' << format_double(r.bcds) << '\n';
    }
}

inline json report_to_json(const TermStructureReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row{{"tenor", r.tenor},       {"Q", r.survival},         {"hazard", r.hazard}, {"zz_spread", r.zz_spread},
                 {"par_coupon", r.par_coupon}, {"p_spread", r.p_spread}, {"bcds", r.bcds}};
        for (std::size_t i = 0; i < rep.ccp_coupons.size(); ++i) row[ccp_column(rep.ccp_coupons[i])] = r.ccp[i];
        rows.push_back(std::move(row));
    }
    return {{"ccp_coupons", rep.ccp_coupons}, {"rows", rows}};
}

/// Parse a plain decimal number, false on any trailing text.
inline bool parse_number(std::string_view s, double& v) {
    s = detail::trim(s);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(v);
}

/// Comma-separated list of numbers.
inline std::vector<double> parse_number_list(std::string_view s, const std::string& what) {
    std::vector<double> out;
    for (const auto& cell : detail::split(s)) {
        double v = 0.0;
        if (!parse_number(cell, v)) throw ParseError(what + ": not a number: '" + cell + "'", 0);
        out.push_back(v);
    }
    return out;
}

} // namespace credit::io
