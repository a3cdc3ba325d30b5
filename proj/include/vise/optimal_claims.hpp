#pragma once

// The group claims threshold t0 that maximizes the society's expected one-step
// increment, in closed form, plus a numeric maximizer and a finite-difference
// check used to verify it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vise/error.hpp"
#include "vise/expectations.hpp"
#include "vise/golden_section.hpp"
#include "vise/model.hpp"

namespace vise {

/// Which closed form applies.
///   group_decisive        alpha < 1 - delta: the group alone can pass a proposal
///   egoists_insufficient  delta <= alpha: egoists alone cannot
///   both                  both of the above; t0 = -beta mu
enum class ClaimsCase { general, group_decisive, egoists_insufficient, both, degenerate };

inline std::string_view to_string(ClaimsCase c) {
    switch (c) {
        case ClaimsCase::general: return "general";
        case ClaimsCase::group_decisive: return "group-decisive";
        case ClaimsCase::egoists_insufficient: return "egoists-insufficient";
        case ClaimsCase::both: return "both";
        case ClaimsCase::degenerate: return "degenerate";
    }
    return "unknown";
}

struct OptimalThresholdResult {
    double t0 = 0.0;
    ClaimsCase case_tag = ClaimsCase::general;
    double society_value_at_t0 = 0.0;
    /// The special-case closed form for case_tag, when one applies.
    std::optional<double> special_case_t0;
    double beta = 0.0;
    double f_gamma = 0.0;
    double f_alpha = 0.0;
    double mu_plus_gamma = 0.0;
    double mu_plus_alpha = 0.0;
};

/// Classifies a configuration by the coalition structure alone.
inline ClaimsCase classify_claims_case(const Configuration& config) {
    const bool group_decisive = config.gamma_votes() < 0.0;
    const bool egoists_insufficient = config.alpha_votes() >= static_cast<double>(config.ell());
    if (group_decisive && egoists_insufficient) return ClaimsCase::both;
    if (group_decisive) return ClaimsCase::group_decisive;
    if (egoists_insufficient) return ClaimsCase::egoists_insufficient;
    return ClaimsCase::general;
}

/// True when the group's vote can never change the outcome, so the claims
/// threshold has no effect: egoists pass or fail a proposal regardless.
inline bool claims_threshold_is_inert(const Configuration& config) {
    if (config.g() == 0) return true;
    const std::int64_t ell = config.ell();
    const std::int64_t with_group = detail::votes_needed(config.gamma_votes(), ell);
    const std::int64_t without_group = detail::votes_needed(config.alpha_votes(), ell);
    return with_group == without_group;
}

/// t0 = beta (mu+_alpha - mu+_gamma) / (F_gamma - F_alpha).
///
/// Throws DegenerateModelError when the group is empty or its vote never pivots
/// (alpha n < 0 or gamma n >= ell), because then every t is equally good.
/// The t in `config` is ignored.
inline OptimalThresholdResult optimal_threshold(const Configuration& config) {
    if (config.g() == 0) {
        throw DegenerateModelError("no group (ell = n): the claims threshold has no effect");
    }
    if (claims_threshold_is_inert(config)) {
        std::string why = config.gamma_votes() >= static_cast<double>(config.ell())
                              ? "gamma n >= ell: egoists cannot pass a proposal even with the group's support"
                              : "alpha n < 0: every proposal passes without the group";
        throw DegenerateModelError("the group's vote never changes the outcome (" + why +
                                   "), so no claims threshold is optimal");
    }

    const VotingTerms terms(config);
    OptimalThresholdResult r;
    r.case_tag = classify_claims_case(config);
    r.beta = *config.beta();
    r.f_gamma = terms.f_gamma();
    r.f_alpha = terms.f_alpha();

    if (config.ell() == 0) {
        // Pure group: society value is the group member's, maximal at t = 0.
        r.t0 = 0.0;
        r.special_case_t0 = 0.0;
        r.society_value_at_t0 = terms.society(0.0);
        return r;
    }

    r.mu_plus_gamma = terms.mu_plus_gamma();
    r.mu_plus_alpha = terms.mu_plus_alpha();
    const double denominator = terms.tail_gap();
    if (!(denominator > 0.0)) {
        throw DegenerateModelError("F_gamma - F_alpha underflows to zero for mu / sigma = " +
                                   std::to_string(config.mu() / config.sigma()) +
                                   "; the claims threshold has no numerical effect");
    }
    r.t0 = r.beta / denominator * terms.mu_plus_gap();

    const double mu = config.mu();
    switch (r.case_tag) {
        case ClaimsCase::both:
            r.special_case_t0 = -r.beta * mu;
            break;
        case ClaimsCase::group_decisive:
            // gamma n < 0, so the gaps are exactly 1 - F_alpha and mu+_alpha - mu,
            // summed over the lower tail instead of subtracted from 1 and mu
            r.special_case_t0 = r.beta / terms.tail_gap() * terms.mu_plus_gap();
            break;
        case ClaimsCase::egoists_insufficient:
            r.special_case_t0 = -r.beta / r.f_gamma * r.mu_plus_gamma;
            break;
        default:
            break;
    }
    r.society_value_at_t0 = terms.society(r.t0);
    return r;
}

struct NumericArgmax {
    double t = 0.0;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool used_grid_fallback = false;
    bool degenerate = false;  ///< objective numerically flat over the bracket
};

/// Default search bracket: mu +- 6 sigma / sqrt(g).
inline std::pair<double, double> default_claims_bracket(const Configuration& config) {
    const double half = 6.0 * config.sigma() / std::sqrt(static_cast<double>(std::max<std::int64_t>(config.g(), 1)));
    return {config.mu() - half, config.mu() + half};
}

/// Maximizes the analytic society increment over t by golden-section search,
/// comparing points through society_difference, then cross-checks against a
/// 401-point grid. If the grid finds a better point (the objective is not unimodal at this resolution) the search is
/// restarted around the best grid cell and the result is flagged.
inline NumericArgmax numeric_argmax_t(const Configuration& config, std::optional<std::pair<double, double>> bracket = {},
                                      double tol = 1e-9) {
    if (config.g() == 0) throw DegenerateModelError("no group (ell = n): the claims threshold has no effect");
    const auto [lo, hi] = bracket.value_or(default_claims_bracket(config));
    if (!(lo < hi)) throw ValidationError("bracket", "need lo < hi");
    const VotingTerms terms(config);
    auto objective = [&](double t) { return terms.society(t); };

    NumericArgmax out;
    out.lo = lo;
    out.hi = hi;
    constexpr std::size_t grid_points = 401;
    const ScalarMaximum grid = grid_maximize(objective, lo, hi, grid_points);
    double grid_min = grid.value;
    for (std::size_t i = 0; i < grid_points; ++i) {
        grid_min = std::min(grid_min, objective(lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1)));
    }
    out.degenerate = grid.value - grid_min <= 1e-14 * (1.0 + std::abs(grid.value));

    auto better = [&](double x, double y) { return terms.society_difference(x, y) >= 0.0; };
    const double x = golden_section_argmax(better, lo, hi, tol);
    ScalarMaximum best{x, objective(x), 0};
    if (grid.value > best.value + 1e-14 * (1.0 + std::abs(grid.value))) {
        const double cell = (hi - lo) / (grid_points - 1);
        const double xr = golden_section_argmax(better, std::max(lo, grid.x - cell), std::min(hi, grid.x + cell), tol);
        best = {xr, objective(xr), 0};
        if (grid.value > best.value) best = grid;
        out.used_grid_fallback = true;
    }
    out.t = best.x;
    out.value = best.value;
    return out;
}

struct StationarityDiagnostics {
    double first_derivative = 0.0;   ///< central difference, step sigma / sqrt(g) * 1e-3
    double second_derivative = 0.0;  ///< second difference, step sigma / sqrt(g) * 5e-2
    bool stationary = false;         ///< |first derivative| <= 1e-6
    bool maximum = false;            ///< second difference < 0
};

/// Finite-difference check of the society objective at `t`.
inline StationarityDiagnostics stationarity_check(const Configuration& config, double t) {
    if (!std::isfinite(t)) throw ValidationError("t0", "must be finite");
    if (config.g() == 0) throw DegenerateModelError("no group (ell = n): the claims threshold has no effect");
    const VotingTerms terms(config);
    const double scale = config.sigma() / std::sqrt(static_cast<double>(config.g()));
    const double h1 = 1e-3 * scale;
    const double h2 = 5e-2 * scale;
    StationarityDiagnostics d;
    d.first_derivative = terms.society_difference(t + h1, t - h1) / (2.0 * h1);
    d.second_derivative = (terms.society_difference(t + h2, t) + terms.society_difference(t - h2, t)) / (h2 * h2);
    d.stationary = std::abs(d.first_derivative) <= 1e-6;
    d.maximum = d.second_derivative < 0.0;
    return d;
}

}  // namespace vise
