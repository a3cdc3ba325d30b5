#pragma once

// Seeded simulation of voting trajectories. Serves as the independent check of
// every closed-form expectation: it only draws proposals, applies the voting
// rule, and averages what happened.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "vise/error.hpp"
#include "vise/format.hpp"
#include "vise/model.hpp"
#include "vise/parallel.hpp"
#include "vise/random.hpp"

namespace vise {

/// Streaming mean and variance (Welford), mergeable in a fixed order (Chan et al.).
class RunningStats {
public:
    void add(double x) noexcept {
        ++count_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(count_);
        m2_ += d * (x - mean_);
    }

    void merge(const RunningStats& other) noexcept {
        if (other.count_ == 0) return;
        if (count_ == 0) {
            *this = other;
            return;
        }
        const double total = static_cast<double>(count_ + other.count_);
        const double d = other.mean_ - mean_;
        mean_ += d * static_cast<double>(other.count_) / total;
        m2_ += other.m2_ + d * d * static_cast<double>(count_) * static_cast<double>(other.count_) / total;
        count_ += other.count_;
    }

    std::int64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double standard_error() const noexcept {
        return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct Estimate {
    double mean = 0.0;
    double se = 0.0;

    /// |mean - reference| in units of the standard error (0/0 counts as 0).
    double z_score(double reference) const noexcept {
        const double diff = std::abs(mean - reference);
        if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return diff / se;
    }
};

struct SimulationConfig {
    SocietyParams society;
    EnvironmentParams env;
    std::int64_t steps = 1;
    std::int64_t replications = 1;
    std::uint64_t seed = 0;
    unsigned workers = 0;  ///< 0 = one per hardware thread; never changes results
};

struct CapitalSummary {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct TrajectoryStats {
    std::optional<Estimate> mean_egoist_step;  ///< undefined without egoists
    std::optional<Estimate> mean_group_step;   ///< undefined without a group
    Estimate mean_society_step;
    double acceptance_rate = 0.0;
    std::optional<CapitalSummary> egoist_capitals;
    std::optional<CapitalSummary> group_capitals;
    std::int64_t step_samples = 0;
};

/// Everything one replication produced.
struct ReplicationResult {
    RunningStats egoist;
    RunningStats group;
    RunningStats society;
    std::int64_t accepted = 0;
    std::vector<double> capitals;
};

/// Called once per step with the drawn proposal and its tally.
using StepObserver = std::function<void(std::int64_t step, std::span<const double> increments, const VoteOutcome&)>;

inline void check_simulation_config(const SimulationConfig& sim) {
    if (sim.steps < 1) throw ValidationError("steps", "must be >= 1");
    if (sim.replications < 1) throw ValidationError("replications", "must be >= 1");
}

/// Runs replication `index` using its own substream of `sim.seed`.
inline ReplicationResult run_replication(const Configuration& config, const SimulationConfig& sim, std::int64_t index,
                                         const StepObserver& observer = {}) {
    check_simulation_config(sim);
    auto rng = substream(sim.seed, static_cast<std::uint64_t>(index));
    const ZigguratNormal normal;
    const auto n = static_cast<std::size_t>(config.n());
    const auto ell = static_cast<std::size_t>(config.ell());
    const double mu = config.mu();
    const double sigma = config.sigma();

    ReplicationResult out;
    out.capitals.assign(n, 0.0);
    std::vector<double> increments(n);
    for (std::int64_t step = 0; step < sim.steps; ++step) {
        for (auto& x : increments) x = mu + sigma * normal(rng);
        const VoteOutcome outcome = tally_votes(increments, config);
        double egoist_sum = 0.0;
        double group_sum = 0.0;
        if (outcome.accepted) {
            ++out.accepted;
            apply_step(out.capitals, outcome, increments);
            for (std::size_t i = 0; i < ell; ++i) egoist_sum += increments[i];
            for (std::size_t i = ell; i < n; ++i) group_sum += increments[i];
        }
        if (ell > 0) out.egoist.add(egoist_sum / static_cast<double>(ell));
        if (ell < n) out.group.add(group_sum / static_cast<double>(n - ell));
        out.society.add((egoist_sum + group_sum) / static_cast<double>(n));
        if (observer) observer(step, increments, outcome);
    }
    return out;
}

/// Simulates `replications` independent trajectories of `steps` steps each.
/// Rejected steps count as zero increments. Replications run concurrently and
/// are merged in index order, so results are bit-identical for any worker count.
inline TrajectoryStats run(const SimulationConfig& sim) {
    check_simulation_config(sim);
    const Configuration config = validate(sim.society, sim.env);
    std::vector<ReplicationResult> results(static_cast<std::size_t>(sim.replications));
    parallel_for(results.size(), sim.workers,
                 [&](std::size_t r) { results[r] = run_replication(config, sim, static_cast<std::int64_t>(r)); });

    RunningStats egoist;
    RunningStats group;
    RunningStats society;
    std::int64_t accepted = 0;
    const auto ell = static_cast<std::size_t>(config.ell());
    CapitalSummary ego_cap{0.0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    CapitalSummary grp_cap = ego_cap;
    double ego_total = 0.0;
    double grp_total = 0.0;
    for (const auto& r : results) {
        egoist.merge(r.egoist);
        group.merge(r.group);
        society.merge(r.society);
        accepted += r.accepted;
        for (std::size_t i = 0; i < r.capitals.size(); ++i) {
            CapitalSummary& s = i < ell ? ego_cap : grp_cap;
            (i < ell ? ego_total : grp_total) += r.capitals[i];
            s.min = std::min(s.min, r.capitals[i]);
            s.max = std::max(s.max, r.capitals[i]);
        }
    }

    TrajectoryStats stats;
    const double reps = static_cast<double>(sim.replications);
    if (config.ell() > 0) {
        stats.mean_egoist_step = Estimate{egoist.mean(), egoist.standard_error()};
        ego_cap.mean = ego_total / (reps * static_cast<double>(config.ell()));
        stats.egoist_capitals = ego_cap;
    }
    if (config.g() > 0) {
        stats.mean_group_step = Estimate{group.mean(), group.standard_error()};
        grp_cap.mean = grp_total / (reps * static_cast<double>(config.g()));
        stats.group_capitals = grp_cap;
    }
    stats.mean_society_step = Estimate{society.mean(), society.standard_error()};
    stats.step_samples = society.count();
    stats.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(stats.step_samples);
    return stats;
}

/// Empirical mu+: draws `ell` i.i.d. N(mu, sigma^2) increments per sample and
/// records the first voter's increment when strictly more than `ell0` of them
/// are positive (zero otherwise). Samples are split into fixed-size chunks,
/// chunk c drawing from substream c of `seed`.
inline Estimate estimate_mu_plus(double mu, double sigma, std::int64_t ell, double ell0, std::int64_t samples,
                                 std::uint64_t seed, unsigned workers = 0) {
    if (samples < 10000) throw ValidationError("samples", "must be >= 10^4");
    if (ell < 1) throw ValidationError("ell", "must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma", "must be positive and finite");
    if (!std::isfinite(mu)) throw ValidationError("mu", "must be finite");
    if (std::isnan(ell0)) throw ValidationError("ell0", "must not be NaN");

    constexpr std::int64_t chunk = 1 << 18;
    const std::int64_t chunks = (samples + chunk - 1) / chunk;
    std::vector<RunningStats> parts(static_cast<std::size_t>(chunks));
    parallel_for(parts.size(), workers, [&](std::size_t c) {
        auto rng = substream(seed, c);
        const ZigguratNormal normal;
        const std::int64_t begin = static_cast<std::int64_t>(c) * chunk;
        const std::int64_t end = std::min(samples, begin + chunk);
        RunningStats acc;
        for (std::int64_t s = begin; s < end; ++s) {
            const double first = mu + sigma * normal(rng);
            std::int64_t yes = first > 0.0 ? 1 : 0;
            for (std::int64_t i = 1; i < ell; ++i) yes += (mu + sigma * normal(rng)) > 0.0 ? 1 : 0;
            acc.add(static_cast<double>(yes) > ell0 ? first : 0.0);
        }
        parts[c] = acc;
    });
    RunningStats total;
    for (const auto& p : parts) total.merge(p);
    return {total.mean(), total.standard_error()};
}

/// Header of the per-step trajectory dump.
inline constexpr const char* trajectory_csv_header =
    "step,accepted,egoist_yes,group_yes,mean_egoist_increment,mean_group_increment,mean_society_increment";

/// Writes one row per step of replication `index`. Role means are realized
/// increments (0 on rejected steps); a role without members prints nan.
inline void write_trajectory_csv(std::ostream& out, const SimulationConfig& sim, std::int64_t index = 0) {
    const Configuration config = validate(sim.society, sim.env);
    const auto ell = static_cast<std::size_t>(config.ell());
    const auto n = static_cast<std::size_t>(config.n());
    out << trajectory_csv_header << '\n';
    run_replication(config, sim, index, [&](std::int64_t step, std::span<const double> inc, const VoteOutcome& o) {
        double e = 0.0;
        double g = 0.0;
        if (o.accepted) {
            for (std::size_t i = 0; i < ell; ++i) e += inc[i];
            for (std::size_t i = ell; i < n; ++i) g += inc[i];
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out << step << ',' << (o.accepted ? 1 : 0) << ',' << o.egoist_yes << ',' << (o.group_yes ? 1 : 0) << ','
            << format_number(ell > 0 ? e / static_cast<double>(ell) : nan) << ','
            << format_number(ell < n ? g / static_cast<double>(n - ell) : nan) << ','
            << format_number((e + g) / static_cast<double>(n)) << '\n';
    });
    if (!out) throw IoError("failed writing trajectory CSV");
}

}  // namespace vise
