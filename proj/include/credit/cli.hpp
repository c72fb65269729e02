#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "basis_hedging.hpp"
#include "calibration.hpp"
#include "conventional.hpp"
#include "error.hpp"
#include "io.hpp"
#include "measures.hpp"

namespace credit::cli {

enum ExitCode : int { ok = 0, generic_failure = 1, parse_failure = 2, insufficient_data = 3, missing_input = 4, numerical_failure = 5 };

enum class OutputFormat { csv, json };

struct RunConfig {
    std::string command;
    std::string base_path;
    std::string bonds_path;
    std::string cds_path;
    std::string curve_path;
    double recovery = 0.4;
    FitConfig fit;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
    /// Staggered-hedge maturities; empty means whole years up to each bond's maturity.
    std::vector<double> candidates;
};

namespace detail {

inline BaseCurve load_base(const RunConfig& cfg) {
    if (cfg.base_path.empty()) throw MissingInputError("base curve required (--base)");
    return io::read_base_curve_file(cfg.base_path);
}

inline std::vector<BondQuote> load_bonds(const RunConfig& cfg) {
    if (cfg.bonds_path.empty()) throw MissingInputError("bond quotes required (--bonds)");
    return io::read_bond_quotes_file(cfg.bonds_path);
}

inline std::vector<CdsQuote> load_cds(const RunConfig& cfg) {
    if (cfg.cds_path.empty()) throw MissingInputError("CDS quotes required (--cds)");
    return io::read_cds_quotes_file(cfg.cds_path);
}

inline FitConfig fit_config(const RunConfig& cfg) {
    FitConfig f = cfg.fit;
    f.recovery = cfg.recovery;
    return f;
}

/// Curve from --curve when given, otherwise fitted to the bond quotes.
inline SurvivalCurve bond_curve(const RunConfig& cfg, const BaseCurve& base, std::span<const BondQuote> quotes) {
    if (!cfg.curve_path.empty()) return io::read_curve_file(cfg.curve_path);
    if (cfg.bonds_path.empty()) throw MissingInputError("survival curve required (--curve or --bonds)");
    return fit_survival(quotes, base, fit_config(cfg)).curve;
}

class OutputDir {
public:
    explicit OutputDir(const std::string& dir) : dir_(dir) { std::filesystem::create_directories(dir_); }

    [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

    template <class Writer>
    std::string write(const std::string& name, Writer&& w) const {
        const auto p = path(name);
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + p);
        w(out);
        out.flush();
        if (!out) throw Error("failed writing " + p);
        return p;
    }

    std::string write_json(const std::string& name, const nlohmann::json& j) const {
        return write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }

private:
    std::filesystem::path dir_;
};

inline std::vector<double> candidates_for(const RunConfig& cfg, double maturity) {
    if (!cfg.candidates.empty()) return cfg.candidates;
    std::vector<double> c;
    for (int y = 1; y < maturity - 1e-12; ++y) c.push_back(y);
    c.push_back(maturity);
    return c;
}

/// Rows of a CSV table or the same records as a JSON array.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> values;

    void write_csv(std::ostream& o) const {
        o << "id";
        for (const auto& c : columns) o << ',' << c;
        o << '\n';
        for (std::size_t r = 0; r < ids.size(); ++r) {
            o << ids[r];
            for (double v : values[r]) o << ',' << io::format_double(v);
            o << '\n';
        }
    }

    [[nodiscard]] nlohmann::json to_json() const {
        auto rows = nlohmann::json::array();
        for (std::size_t r = 0; r < ids.size(); ++r) {
            nlohmann::json row{{"id", ids[r]}};
            for (std::size_t c = 0; c < columns.size(); ++c) row[columns[c]] = values[r][c];
            rows.push_back(std::move(row));
        }
        return rows;
    }
};

inline std::string write_table(const OutputDir& dir, const std::string& stem, const Table& t, OutputFormat f) {
    if (f == OutputFormat::json) return dir.write_json(stem + ".json", t.to_json());
    return dir.write(stem + ".csv", [&](std::ostream& o) { t.write_csv(o); });
}

} // namespace detail

inline void cmd_fit(const RunConfig& cfg, std::ostream& log) {
    const auto base = detail::load_base(cfg);
    const auto quotes = detail::load_bonds(cfg);
    const auto fit = fit_survival(quotes, base, detail::fit_config(cfg));
    const detail::OutputDir dir(cfg.out_dir);
    log << "wrote " << dir.write_json("curve.json", io::curve_to_json(fit.curve)) << '\n';
    if (cfg.format == OutputFormat::json) {
        log << "wrote " << dir.write_json("residuals.json", io::residuals_to_json(fit)) << '\n';
    } else {
        log << "wrote " << dir.write("residuals.csv", [&](std::ostream& o) { io::write_residuals_csv(o, fit); }) << '\n';
    }
    log << "wrote " << dir.write_json("diagnostics.json", io::diagnostics_to_json(fit)) << '\n';
    log << "eta " << io::format_double(fit.eta) << ", weighted error " << io::format_double(fit.weighted_error) << '\n';
}

inline void cmd_report(const RunConfig& cfg, std::ostream& log) {
    const auto base = detail::load_base(cfg);
    std::vector<BondQuote> quotes;
    if (cfg.curve_path.empty()) quotes = detail::load_bonds(cfg);
    const auto sc = detail::bond_curve(cfg, base, quotes);
    const auto rep = term_structure_report(base, sc, cfg.recovery);
    const detail::OutputDir dir(cfg.out_dir);
    if (cfg.format == OutputFormat::json) {
        log << "wrote " << dir.write_json("termstructure.json", io::report_to_json(rep)) << '\n';
    } else {
        log << "wrote " << dir.write("termstructure.csv", [&](std::ostream& o) { io::write_report_csv(o, rep); })
            << '\n';
    }
}

inline void cmd_price(const RunConfig& cfg, std::ostream& log) {
    const auto base = detail::load_base(cfg);
    const auto quotes = detail::load_bonds(cfg);
    const auto sc = detail::bond_curve(cfg, base, quotes);
    detail::Table t;
    t.columns = {"market", "fitted", "residual", "z_spread_bp", "das_bp", "fitted_p_spread_bp", "excess_spread_bp"};
    for (const auto& q : quotes) {
        const double fitted = fitted_price(q.spec, base, sc, cfg.recovery);
        const double d = das(q.spec, q.clean_price, base, sc, cfg.recovery);
        const double ps = fitted_p_spread(q.spec, base, sc, cfg.recovery);
        t.ids.push_back(q.id);
        t.values.push_back({q.clean_price, fitted, q.clean_price - fitted, z_spread(q.spec, q.clean_price, base) * 1e4,
                            d * 1e4, ps * 1e4, (ps + d) * 1e4});
    }
    log << "wrote " << detail::write_table(detail::OutputDir(cfg.out_dir), "prices", t, cfg.format) << '\n';
}

inline void cmd_basis(const RunConfig& cfg, std::ostream& log) {
    const auto base = detail::load_base(cfg);
    const auto quotes = detail::load_bonds(cfg);
    const auto cds = detail::load_cds(cfg);
    const auto sc_cds = calibrate_from_cds(cds, base, cfg.recovery);
    const auto sc_bond = detail::bond_curve(cfg, base, quotes);
    detail::Table t;
    t.columns = {"basis_spread_bp", "approx_basis_bp", "hedge_cost_bp"};
    auto plans = nlohmann::json::array();
    for (const auto& q : quotes) {
        const auto cands = detail::candidates_for(cfg, q.spec.maturity);
        const auto plan = coarse_hedge(q.spec, base, sc_cds, cfg.recovery, cands);
        const double bs = basis_spread(q.spec, q.clean_price, base, sc_cds, cfg.recovery);
        const double ab = approx_basis(q.spec, q.clean_price, base, sc_bond, sc_cds, cfg.recovery, plan);
        t.ids.push_back(q.id);
        t.values.push_back({bs * 1e4, ab * 1e4, plan.cost * 1e4});
        plans.push_back({{"id", q.id}, {"plan", io::hedge_plan_to_json(plan)}});
    }
    const detail::OutputDir dir(cfg.out_dir);
    log << "wrote " << detail::write_table(dir, "basis", t, cfg.format) << '\n';
    log << "wrote " << dir.write_json("hedge_plans.json", plans) << '\n';
}

inline void cmd_hedge(const RunConfig& cfg, std::ostream& log) {
    const auto base = detail::load_base(cfg);
    const auto quotes = detail::load_bonds(cfg);
    const auto cds = detail::load_cds(cfg);
    const auto sc_cds = calibrate_from_cds(cds, base, cfg.recovery);
    auto out = nlohmann::json::array();
    for (const auto& q : quotes) {
        const auto cands = detail::candidates_for(cfg, q.spec.maturity);
        out.push_back({{"id", q.id},
                       {"forward_notional", fwd_hedge_notional(q.spec, base, sc_cds, cfg.recovery, 0.0)},
                       {"coarse", io::hedge_plan_to_json(coarse_hedge(q.spec, base, sc_cds, cfg.recovery, cands))},
                       {"staggered", io::hedge_plan_to_json(spot_hedge_notionals(q.spec, base, sc_cds, cfg.recovery))}});
    }
    log << "wrote " << detail::OutputDir(cfg.out_dir).write_json("hedge.json", out) << '\n';
}

inline int exit_code_for(const std::exception_ptr& e, std::ostream& err) {
    try {
        std::rethrow_exception(e);
    } catch (const ParseError& x) {
        err << "parse error: " << x.what() << '\n';
        return parse_failure;
    } catch (const InsufficientDataError& x) {
        err << "insufficient data: " << x.what() << '\n';
        return insufficient_data;
    } catch (const MissingInputError& x) {
        err << "missing input: " << x.what() << '\n';
        return missing_input;
    } catch (const FitError& x) {
        err << "fit failed: " << x.what() << '\n';
        return numerical_failure;
    } catch (const ConvergenceError& x) {
        err << "numerical failure: " << x.what() << '\n';
        return numerical_failure;
    } catch (const ArbitrageError& x) {
        err << "numerical failure: " << x.what() << '\n';
        return numerical_failure;
    } catch (const DomainError& x) {
        err << "numerical failure: " << x.what() << '\n';
        return numerical_failure;
    } catch (const std::exception& x) {
        err << "error: " << x.what() << '\n';
        return generic_failure;
    }
}

/// Runs one command line (without the program name). Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Survival-curve fitting, relative value and CDS-bond basis analytics", "credit_cli"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string eta_grid;
    std::string candidates;
    std::string weights = "formula";
    std::string format = "csv";

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--base", cfg.base_path, "risk-free curve CSV (tenor_years, zero_rate|discount_factor)");
        sub->add_option("--recovery", cfg.recovery, "recovery rate R")->check(CLI::Range(0.0, 0.9));
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    };
    const auto add_fit = [&](CLI::App* sub) {
        sub->add_option("--bonds", cfg.bonds_path, "bond quotes CSV");
        sub->add_option("--eta-grid", eta_grid, "comma-separated spline decay rates");
        sub->add_option("--weights", weights, "duration weighting")->check(CLI::IsMember({"formula", "prose"}));
        sub->add_option("--factors", cfg.fit.factors, "number of spline factors")->check(CLI::PositiveNumber);
        sub->add_flag("!--no-refine", cfg.fit.refine_eta, "keep the best grid eta without refinement");
    };

    auto* fit = app.add_subcommand("fit", "fit a survival curve to bond quotes");
    add_common(fit);
    add_fit(fit);
    auto* report = app.add_subcommand("report", "term-structure report of a survival curve");
    add_common(report);
    add_fit(report);
    report->add_option("--curve", cfg.curve_path, "survival curve JSON (fits --bonds when absent)");
    auto* price = app.add_subcommand("price", "fitted prices, DAS and excess spreads per bond");
    add_common(price);
    add_fit(price);
    price->add_option("--curve", cfg.curve_path, "survival curve JSON (fits --bonds when absent)");
    auto* basis = app.add_subcommand("basis", "CDS-bond basis and coarse hedge per bond");
    add_common(basis);
    add_fit(basis);
    basis->add_option("--curve", cfg.curve_path, "bond survival curve JSON (fits --bonds when absent)");
    basis->add_option("--cds", cfg.cds_path, "CDS quotes CSV (maturity_years, par_spread_bp)");
    basis->add_option("--candidates", candidates, "comma-separated staggered hedge maturities");
    auto* hedge = app.add_subcommand("hedge", "staggered and coarse CDS hedges per bond");
    add_common(hedge);
    hedge->add_option("--bonds", cfg.bonds_path, "bond quotes CSV");
    hedge->add_option("--cds", cfg.cds_path, "CDS quotes CSV (maturity_years, par_spread_bp)");
    hedge->add_option("--candidates", candidates, "comma-separated staggered hedge maturities");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return parse_failure;
    }

    try {
        cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        cfg.fit.weighting = weights == "prose" ? DurationWeighting::prose : DurationWeighting::formula;
        if (!eta_grid.empty()) cfg.fit.eta_grid = io::parse_number_list(eta_grid, "--eta-grid");
        if (!candidates.empty()) cfg.candidates = io::parse_number_list(candidates, "--candidates");
        for (double e : cfg.fit.eta_grid) {
            if (!(e > 0.0)) throw ParseError("--eta-grid: values must be positive", 0);
        }
        cfg.fit.validate();
        if (fit->parsed()) {
            cmd_fit(cfg, out);
        } else if (report->parsed()) {
            cmd_report(cfg, out);
        } else if (price->parsed()) {
            cmd_price(cfg, out);
        } else if (basis->parsed()) {
            cmd_basis(cfg, out);
        } else {
            cmd_hedge(cfg, out);
        }
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
    return ok;
}

} // namespace credit::cli
