#pragma once

// CSV and JSON serialization of reports, sweep tables, pit results, and
// simulation statistics. Column order is fixed; see docs/FORMATS.md.

#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "vise/error.hpp"
#include "vise/expectations.hpp"
#include "vise/format.hpp"
#include "vise/monte_carlo.hpp"
#include "vise/optimal_claims.hpp"
#include "vise/sweep.hpp"

namespace vise {

namespace detail {

inline std::string opt_number(const std::optional<double>& x) { return x ? format_number(*x) : "nan"; }

inline nlohmann::json opt_json(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

inline nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

inline void check_stream(const std::ostream& out, const char* what) {
    if (!out) throw IoError(std::string("failed writing ") + what);
}

}  // namespace detail

inline nlohmann::json to_json(const ExpectationReport& r) {
    return {{"egoist", detail::opt_json(r.egoist)},
            {"group_member", detail::opt_json(r.group_member)},
            {"society", r.society},
            {"support_prob", r.support_prob ? nlohmann::json(r.support_prob->value()) : nlohmann::json(nullptr)},
            {"t_tilde", r.t_tilde ? detail::finite_or_null(*r.t_tilde) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const OptimalThresholdResult& r) {
    return {{"t0", r.t0},
            {"case", std::string(to_string(r.case_tag))},
            {"society_value_at_t0", r.society_value_at_t0},
            {"special_case_t0", detail::opt_json(r.special_case_t0)},
            {"beta", r.beta},
            {"f_gamma", r.f_gamma},
            {"f_alpha", r.f_alpha},
            {"mu_plus_gamma", r.mu_plus_gamma},
            {"mu_plus_alpha", r.mu_plus_alpha}};
}

inline nlohmann::json to_json(const Estimate& e) { return {{"mean", e.mean}, {"se", e.se}}; }

inline nlohmann::json to_json(const TrajectoryStats& s) {
    auto est = [](const std::optional<Estimate>& e) { return e ? to_json(*e) : nlohmann::json(nullptr); };
    auto cap = [](const std::optional<CapitalSummary>& c) {
        return c ? nlohmann::json{{"mean", c->mean}, {"min", c->min}, {"max", c->max}} : nlohmann::json(nullptr);
    };
    return {{"mean_egoist_step", est(s.mean_egoist_step)},
            {"mean_group_step", est(s.mean_group_step)},
            {"mean_society_step", to_json(s.mean_society_step)},
            {"acceptance_rate", s.acceptance_rate},
            {"step_samples", s.step_samples},
            {"final_capitals", {{"egoist", cap(s.egoist_capitals)}, {"group", cap(s.group_capitals)}}}};
}

inline constexpr const char* sweep_csv_header =
    "n,ell,delta,alpha,mu,sigma,mu_over_sigma,t_used,t_over_sigma,egoist,group,society,group_minus_egoist,"
    "support_prob,t_tilde,case,flag";

inline void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << sweep_csv_header << '\n';
    for (const auto& r : table.rows) {
        const auto& rep = r.report;
        const std::string diff =
            rep.egoist && rep.group_member ? format_number(*rep.group_member - *rep.egoist) : std::string("nan");
        out << r.n << ',' << r.ell << ',' << format_number(r.delta()) << ',' << format_number(r.alpha) << ','
            << format_number(r.mu) << ',' << format_number(r.sigma) << ',' << format_number(r.mu / r.sigma) << ','
            << format_number(r.t_used) << ',' << format_number(r.t_used / r.sigma) << ','
            << detail::opt_number(rep.egoist) << ',' << detail::opt_number(rep.group_member) << ','
            << format_number(rep.society) << ',' << diff << ','
            << (rep.support_prob ? format_number(rep.support_prob->value()) : "nan") << ','
            << detail::opt_number(rep.t_tilde) << ','
            << (r.claims_case ? std::string(to_string(*r.claims_case)) : std::string("fixed")) << ','
            << to_string(r.flag) << '\n';
    }
    detail::check_stream(out, "sweep CSV");
}

inline nlohmann::json sweep_summary_json(const SweepTable& table) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : table.spec.axes) {
        axes.push_back({{"axis", std::string(to_string(a.axis))},
                        {"lo", a.lo},
                        {"hi", a.hi},
                        {"step", a.step},
                        {"count", a.values().size()}});
    }
    std::size_t flagged = 0;
    for (const auto& r : table.rows) flagged += r.flag != RowFlag::ok ? 1 : 0;
    const auto& s = table.spec;
    return {{"n", s.n},
            {"ell", s.ell ? nlohmann::json(*s.ell) : nlohmann::json(nullptr)},
            {"delta", detail::opt_json(s.delta)},
            {"alpha", detail::opt_json(s.alpha)},
            {"mu", detail::opt_json(s.mu)},
            {"sigma", s.sigma},
            {"t", detail::opt_json(s.t)},
            {"t_mode", std::string(to_string(s.t_mode))},
            {"axes", axes},
            {"rows", table.rows.size()},
            {"flagged_rows", flagged}};
}

inline constexpr const char* pit_csv_header = "mu_over_sigma,delta,ell,t_used,society,pit,flagged";

inline void write_pit_csv(std::ostream& out, const PitResult& pit) {
    out << pit_csv_header << '\n';
    for (std::size_t i = 0; i < pit.mu_over_sigma.size(); ++i) {
        for (std::size_t j = 0; j < pit.delta.size(); ++j) {
            const PitCell& c = pit.cells[i][j];
            out << format_number(pit.mu_over_sigma[i]) << ',' << format_number(pit.delta[j]) << ','
                << egoists_for_share(pit.delta[j], pit.n) << ',' << format_number(c.t_used) << ','
                << format_number(c.society) << ',' << (c.pit ? 1 : 0) << ',' << (c.flagged ? 1 : 0) << '\n';
        }
    }
    detail::check_stream(out, "pit CSV");
}

inline nlohmann::json pit_summary_json(const PitResult& pit) {
    std::size_t pits = 0;
    std::size_t flagged = 0;
    for (const auto& row : pit.cells) {
        for (const auto& c : row) {
            pits += c.pit ? 1 : 0;
            flagged += c.flagged ? 1 : 0;
        }
    }
    auto grid = [](const std::vector<double>& g) {
        return nlohmann::json{{"lo", g.empty() ? 0.0 : g.front()}, {"hi", g.empty() ? 0.0 : g.back()}, {"count", g.size()}};
    };
    return {{"alpha", pit.alpha},
            {"n", pit.n},
            {"t_mode", std::string(to_string(pit.t_mode))},
            {"delta_max", detail::opt_json(pit.delta_max)},
            {"mu_over_sigma_grid", grid(pit.mu_over_sigma)},
            {"delta_grid", grid(pit.delta)},
            {"pit_cells", pits},
            {"flagged_cells", flagged},
            {"pit_tolerance", pit_tolerance}};
}

}  // namespace vise
