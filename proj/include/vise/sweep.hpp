#pragma once

// Grid evaluation of the expected increments, "pit of losses" detection, and
// the largest egoist share whose pit the optimal claims threshold removes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vise/error.hpp"
#include "vise/expectations.hpp"
#include "vise/model.hpp"
#include "vise/optimal_claims.hpp"
#include "vise/parallel.hpp"

namespace vise {

enum class Axis { t_over_sigma, delta, alpha, mu_over_sigma };
enum class TMode { fixed, optimal };

inline std::string_view to_string(Axis a) {
    switch (a) {
        case Axis::t_over_sigma: return "t_over_sigma";
        case Axis::delta: return "delta";
        case Axis::alpha: return "alpha";
        case Axis::mu_over_sigma: return "mu_over_sigma";
    }
    return "unknown";
}

inline std::string_view to_string(TMode m) { return m == TMode::fixed ? "fixed" : "optimal"; }

inline std::optional<Axis> parse_axis(std::string_view s) {
    for (Axis a : {Axis::t_over_sigma, Axis::delta, Axis::alpha, Axis::mu_over_sigma}) {
        if (to_string(a) == s) return a;
    }
    return std::nullopt;
}

/// lo, lo + step, ..., up to hi (inclusive within 1e-9 steps), rounded to 12
/// decimals so that grid values print cleanly.
inline std::vector<double> grid_values(double lo, double hi, double step) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("axis", "bounds must be finite");
    if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("axis", "step must be positive");
    if (hi < lo) throw ValidationError("axis", "need lo <= hi");
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> v(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        v[static_cast<std::size_t>(i)] = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
    }
    return v;
}

struct AxisRange {
    Axis axis = Axis::t_over_sigma;
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    std::vector<double> values() const { return grid_values(lo, hi, step); }
};

/// Fixed parameters plus one or two swept axes. A parameter that is swept must
/// be left unset; ell and delta are alternatives.
struct SweepSpec {
    std::int64_t n = 100;
    std::optional<std::int64_t> ell;
    std::optional<double> delta;
    std::optional<double> alpha;
    std::optional<double> mu;
    double sigma = 1.0;
    std::optional<double> t;
    std::vector<AxisRange> axes;
    TMode t_mode = TMode::fixed;
    unsigned workers = 0;
};

enum class RowFlag { ok, no_group, no_egoists, degenerate_t0 };

inline std::string_view to_string(RowFlag f) {
    switch (f) {
        case RowFlag::ok: return "ok";
        case RowFlag::no_group: return "no-group";
        case RowFlag::no_egoists: return "no-egoists";
        case RowFlag::degenerate_t0: return "degenerate-t0";
    }
    return "unknown";
}

struct SweepRow {
    std::int64_t n = 0;
    std::int64_t ell = 0;
    double alpha = 0.0;
    double mu = 0.0;
    double sigma = 1.0;
    double t_used = 0.0;
    ExpectationReport report;
    std::optional<ClaimsCase> claims_case;  ///< set in optimal mode
    RowFlag flag = RowFlag::ok;

    double delta() const noexcept { return static_cast<double>(ell) / static_cast<double>(n); }
};

struct SweepTable {
    SweepSpec spec;
    std::vector<SweepRow> rows;  ///< first axis varies slowest
};

/// Nearest egoist count for an egoist share.
inline std::int64_t egoists_for_share(double delta, std::int64_t n) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("delta", "must lie in [0, 1]");
    return static_cast<std::int64_t>(std::llround(delta * static_cast<double>(n)));
}

namespace detail {

inline void check_sweep_spec(const SweepSpec& spec) {
    if (spec.n < 1) throw ValidationError("n", "must be >= 1");
    if (spec.axes.empty() || spec.axes.size() > 2) throw ValidationError("axes", "sweep one or two axes");
    if (spec.axes.size() == 2 && spec.axes[0].axis == spec.axes[1].axis) {
        throw ValidationError("axes", "the two swept axes must differ");
    }
    if (spec.ell && spec.delta) throw ValidationError("delta", "give ell or delta, not both");
    auto swept = [&](Axis a) {
        return std::any_of(spec.axes.begin(), spec.axes.end(), [a](const AxisRange& r) { return r.axis == a; });
    };
    auto require = [&](Axis a, bool fixed, const char* name) {
        if (swept(a) && fixed) throw ValidationError(name, "is swept and must not also be fixed");
        if (!swept(a) && !fixed) throw ValidationError(name, "must be fixed when it is not swept");
    };
    require(Axis::delta, spec.ell.has_value() || spec.delta.has_value(), "delta");
    require(Axis::alpha, spec.alpha.has_value(), "alpha");
    require(Axis::mu_over_sigma, spec.mu.has_value(), "mu");
    if (spec.t_mode == TMode::optimal) {
        if (swept(Axis::t_over_sigma)) throw ValidationError("t", "cannot sweep t in optimal mode");
        if (spec.t) throw ValidationError("t", "must not be fixed in optimal mode");
    } else {
        require(Axis::t_over_sigma, spec.t.has_value(), "t");
    }
    for (const auto& a : spec.axes) (void)a.values();
}

}  // namespace detail

/// Evaluates one configuration, choosing t by the sweep's mode.
inline SweepRow evaluate_point(const SocietyParams& society, const EnvironmentParams& env, TMode mode) {
    const Configuration base = validate(society, env);
    SweepRow row;
    row.n = base.n();
    row.ell = base.ell();
    row.alpha = base.alpha();
    row.mu = base.mu();
    row.sigma = base.sigma();
    row.t_used = base.t();
    if (base.g() == 0) {
        row.flag = RowFlag::no_group;
    } else if (base.ell() == 0) {
        row.flag = RowFlag::no_egoists;
    }
    if (mode == TMode::optimal) {
        if (base.g() == 0 || claims_threshold_is_inert(base)) {
            row.t_used = 0.0;
            row.claims_case = ClaimsCase::degenerate;
            if (row.flag == RowFlag::ok) row.flag = RowFlag::degenerate_t0;
        } else {
            try {
                const auto opt = optimal_threshold(base);
                row.t_used = opt.t0;
                row.claims_case = opt.case_tag;
            } catch (const DegenerateModelError&) {
                row.t_used = 0.0;
                row.claims_case = ClaimsCase::degenerate;
                row.flag = RowFlag::degenerate_t0;
            }
        }
    }
    row.report = report_at(VotingTerms(base), row.t_used);
    return row;
}

/// Evaluates every grid point. Rows are ordered by grid index, the first axis
/// varying slowest, whatever the worker count.
inline SweepTable sweep(const SweepSpec& spec) {
    detail::check_sweep_spec(spec);
    const std::vector<double> first = spec.axes[0].values();
    const std::vector<double> second = spec.axes.size() > 1 ? spec.axes[1].values() : std::vector<double>{0.0};
    SweepTable table{spec, std::vector<SweepRow>(first.size() * second.size())};

    parallel_for(table.rows.size(), spec.workers, [&](std::size_t idx) {
        SocietyParams society;
        society.n = spec.n;
        society.ell = spec.ell ? *spec.ell : (spec.delta ? egoists_for_share(*spec.delta, spec.n) : 0);
        society.alpha = spec.alpha.value_or(0.0);
        society.t = spec.t.value_or(0.0);
        EnvironmentParams env{spec.mu.value_or(0.0), spec.sigma};
        auto apply = [&](const AxisRange& axis, double v) {
            switch (axis.axis) {
                case Axis::t_over_sigma: society.t = v * spec.sigma; break;
                case Axis::delta: society.ell = egoists_for_share(v, spec.n); break;
                case Axis::alpha: society.alpha = v; break;
                case Axis::mu_over_sigma: env.mu = v * spec.sigma; break;
            }
        };
        apply(spec.axes[0], first[idx / second.size()]);
        if (spec.axes.size() > 1) apply(spec.axes[1], second[idx % second.size()]);
        table.rows[idx] = evaluate_point(society, env, spec.t_mode);
    });
    return table;
}

/// Default mu / sigma range for pit detection: -0.99, -0.98, ..., 0.
inline std::vector<double> default_pit_mu_grid() { return grid_values(-0.99, 0.0, 0.01); }

/// Egoist shares k / n for k = 0 .. n - 1 (a group is always present).
inline std::vector<double> lattice_delta_grid(std::int64_t n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = static_cast<double>(k) / static_cast<double>(n);
    return v;
}

/// Strict negativity margin for the pit test.
inline constexpr double pit_tolerance = 1e-9;

struct PitCell {
    double society = 0.0;
    double t_used = 0.0;
    bool pit = false;
    bool flagged = false;  ///< degenerate t0: evaluated at t = 0
};

struct PitResult {
    double alpha = 0.0;
    std::int64_t n = 0;
    TMode t_mode = TMode::optimal;
    std::vector<double> mu_over_sigma;  ///< rows
    std::vector<double> delta;          ///< columns
    std::vector<std::vector<PitCell>> cells;  ///< cells[i][j] at (mu_over_sigma[i], delta[j])
    /// Largest delta such that it and every smaller delta on the grid have a
    /// pit-free column; empty if the first column already has a pit.
    std::optional<double> delta_max;

    bool mask(std::size_t i, std::size_t j) const { return cells.at(i).at(j).pit; }
};

/// Society expectation on the (mu / sigma, delta) grid with sigma = 1 and t = 0
/// or t = t0, marking cells below -1e-9.
inline PitResult pit_region(double alpha, std::int64_t n, TMode t_mode,
                            std::vector<double> mu_over_sigma_grid = default_pit_mu_grid(),
                            std::vector<double> delta_grid = {}, unsigned workers = 0) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha", "must lie in [0, 1]");
    if (delta_grid.empty()) delta_grid = lattice_delta_grid(n);
    if (mu_over_sigma_grid.empty()) throw ValidationError("mu_over_sigma", "grid must be nonempty");
    std::sort(delta_grid.begin(), delta_grid.end());

    PitResult out;
    out.alpha = alpha;
    out.n = n;
    out.t_mode = t_mode;
    out.mu_over_sigma = std::move(mu_over_sigma_grid);
    out.delta = std::move(delta_grid);
    out.cells.assign(out.mu_over_sigma.size(), std::vector<PitCell>(out.delta.size()));

    parallel_for(out.delta.size(), workers, [&](std::size_t j) {
        const std::int64_t ell = egoists_for_share(out.delta[j], n);
        for (std::size_t i = 0; i < out.mu_over_sigma.size(); ++i) {
            const SocietyParams society{n, ell, alpha, 0.0};
            const SweepRow row = evaluate_point(society, {out.mu_over_sigma[i], 1.0}, t_mode);
            PitCell& cell = out.cells[i][j];
            cell.society = row.report.society;
            cell.t_used = row.t_used;
            cell.flagged = row.flag == RowFlag::degenerate_t0;
            cell.pit = cell.society < -pit_tolerance;
        }
    });

    for (std::size_t j = 0; j < out.delta.size(); ++j) {
        const bool clean = std::none_of(out.cells.begin(), out.cells.end(), [j](const auto& r) { return r[j].pit; });
        if (!clean) break;
        out.delta_max = out.delta[j];
    }
    return out;
}

struct DeltaMaxPoint {
    double alpha = 0.0;
    std::optional<double> delta_max;
};

/// delta_max for each alpha with t = t0 over the default mu / sigma range.
inline std::vector<DeltaMaxPoint> max_delta_curve(std::int64_t n, const std::vector<double>& alpha_grid,
                                                  unsigned workers = 0) {
    std::vector<DeltaMaxPoint> out;
    out.reserve(alpha_grid.size());
    for (double a : alpha_grid) {
        if (!(a >= 0.0 && a < 1.0)) throw ValidationError("alpha", "grid must lie in [0, 1)");
        out.push_back({a, pit_region(a, n, TMode::optimal, default_pit_mu_grid(), {}, workers).delta_max});
    }
    return out;
}

/// Majority thresholds in [k/n, (k+1)/n) share floor(alpha n) = k and so the
/// same winning coalitions.
struct ThresholdClass {
    std::int64_t votes = 0;  ///< floor(alpha n)
    double lo = 0.0;
    double hi = 0.0;
    double representative = 0.0;  ///< k / n
};

inline std::int64_t threshold_class(double alpha, std::int64_t n) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha", "must lie in [0, 1]");
    return static_cast<std::int64_t>(std::floor(majority_votes(alpha, n)));
}

/// One class per k = 0 .. n - 1, covering [0, 1).
inline std::vector<ThresholdClass> majority_threshold_classes(std::int64_t n) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    std::vector<ThresholdClass> out;
    out.reserve(static_cast<std::size_t>(n));
    const double dn = static_cast<double>(n);
    for (std::int64_t k = 0; k < n; ++k) {
        const double lo = static_cast<double>(k) / dn;
        out.push_back({k, lo, static_cast<double>(k + 1) / dn, lo});
    }
    return out;
}

}  // namespace vise
