#pragma once

// Parameter records, validation, and the deterministic one-step voting rule.
//
// Participants are laid out egoists first: positions [0, ell) are egoists and
// [ell, n) are group members.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vise/error.hpp"

namespace vise {

/// Proposal increments are i.i.d. N(mu, sigma^2), in capital units.
struct EnvironmentParams {
    double mu = 0.0;
    double sigma = 1.0;
};

struct SocietyParams {
    std::int64_t n = 1;      ///< society size
    std::int64_t ell = 0;    ///< number of egoists
    double alpha = 0.5;      ///< strict relative majority threshold
    double t = 0.0;          ///< group claims threshold, capital units; may be +-inf
};

/// alpha * n, snapped to the nearest integer when within 1e-9 of it so that
/// decimal thresholds such as 0.29 * 100 keep their intended integer cut.
inline double majority_votes(double alpha, std::int64_t n) {
    const double exact = alpha * static_cast<double>(n);
    const double nearest = std::nearbyint(exact);
    const double slack = 1e-9 * std::max(1.0, static_cast<double>(n));
    return std::abs(exact - nearest) <= slack ? nearest : exact;
}

/// A validated society/environment pair with its derived shares.
class Configuration {
public:
    const SocietyParams& society() const noexcept { return society_; }
    const EnvironmentParams& env() const noexcept { return env_; }

    std::int64_t n() const noexcept { return society_.n; }
    std::int64_t ell() const noexcept { return society_.ell; }
    std::int64_t g() const noexcept { return society_.n - society_.ell; }
    double alpha() const noexcept { return society_.alpha; }
    double t() const noexcept { return society_.t; }
    double mu() const noexcept { return env_.mu; }
    double sigma() const noexcept { return env_.sigma; }

    /// Share of egoists, ell / n.
    double delta() const noexcept { return static_cast<double>(ell()) / static_cast<double>(n()); }
    /// ell / g; only defined while the group is nonempty.
    std::optional<double> beta() const noexcept {
        if (g() == 0) return std::nullopt;
        return static_cast<double>(ell()) / static_cast<double>(g());
    }
    /// alpha + delta - 1.
    double gamma() const noexcept { return alpha() + delta() - 1.0; }

    /// alpha * n (snapped), the vote count that must be strictly exceeded.
    double alpha_votes() const noexcept { return alpha_votes_; }
    /// gamma * n = alpha * n - g, the egoist votes that must be strictly
    /// exceeded when the group supports the proposal.
    double gamma_votes() const noexcept { return alpha_votes_ - static_cast<double>(g()); }

    /// Minimum total yes votes for acceptance, floor(alpha n) + 1.
    std::int64_t votes_to_accept() const noexcept { return votes_to_accept_; }
    /// Minimum egoist yes votes for acceptance given the group's vote.
    std::int64_t egoist_votes_to_accept(bool group_yes) const noexcept {
        return group_yes ? votes_to_accept_ - g() : votes_to_accept_;
    }

    /// Same configuration with a different claims threshold.
    Configuration with_t(double t) const {
        if (std::isnan(t)) throw ValidationError("t", "must not be NaN");
        Configuration copy = *this;
        copy.society_.t = t;
        return copy;
    }

    friend Configuration validate(const SocietyParams& society, const EnvironmentParams& env);

private:
    Configuration(const SocietyParams& society, const EnvironmentParams& env)
        : society_(society), env_(env), alpha_votes_(majority_votes(society.alpha, society.n)) {
        votes_to_accept_ = static_cast<std::int64_t>(std::floor(alpha_votes_)) + 1;
    }

    SocietyParams society_;
    EnvironmentParams env_;
    double alpha_votes_;
    std::int64_t votes_to_accept_;
};

/// Checks every field and computes derived quantities. Throws ValidationError
/// naming the first offending field.
inline Configuration validate(const SocietyParams& society, const EnvironmentParams& env) {
    if (society.n < 1) throw ValidationError("n", "society size must be >= 1");
    if (society.ell < 0 || society.ell > society.n) {
        throw ValidationError("ell", "egoist count must lie in [0, n] (n = " + std::to_string(society.n) +
                                         ", ell = " + std::to_string(society.ell) + ")");
    }
    if (!(society.alpha >= 0.0 && society.alpha <= 1.0)) {
        throw ValidationError("alpha", "majority threshold must lie in [0, 1]");
    }
    if (std::isnan(society.t)) throw ValidationError("t", "must not be NaN");
    if (!std::isfinite(env.mu)) throw ValidationError("mu", "must be finite");
    if (!(env.sigma > 0.0) || !std::isfinite(env.sigma)) {
        throw ValidationError("sigma", "must be positive and finite");
    }
    return Configuration(society, env);
}

/// One draw of the environment: the proposed capital increment of every
/// participant, egoists first.
class Proposal {
public:
    explicit Proposal(std::vector<double> increments) : increments_(std::move(increments)) {
        for (double x : increments_) {
            if (!std::isfinite(x)) throw ValidationError("proposal", "increments must be finite");
        }
    }

    std::span<const double> increments() const noexcept { return increments_; }
    std::size_t size() const noexcept { return increments_.size(); }

private:
    std::vector<double> increments_;
};

struct VoteOutcome {
    std::int64_t egoist_yes = 0;
    bool group_yes = false;
    std::int64_t total_yes = 0;
    bool accepted = false;
    double group_mean = std::numeric_limits<double>::quiet_NaN();  ///< NaN when g = 0
};

/// Applies the voting rule to raw increments (no copying; the simulator's
/// hot path). Egoist i votes yes iff its increment is > 0; the group votes yes
/// as a bloc iff its mean increment is > t; accepted iff total_yes > alpha n.
inline VoteOutcome tally_votes(std::span<const double> increments, const Configuration& config) {
    if (increments.size() != static_cast<std::size_t>(config.n())) {
        throw ValidationError("proposal", "length must equal n");
    }
    VoteOutcome out;
    const auto ell = static_cast<std::size_t>(config.ell());
    for (std::size_t i = 0; i < ell; ++i) {
        out.egoist_yes += increments[i] > 0.0 ? 1 : 0;
    }
    if (config.g() > 0) {
        double sum = 0.0;
        for (std::size_t i = ell; i < increments.size(); ++i) sum += increments[i];
        out.group_mean = sum / static_cast<double>(config.g());
        out.group_yes = out.group_mean > config.t();
    }
    out.total_yes = out.egoist_yes + (out.group_yes ? config.g() : 0);
    out.accepted = out.total_yes >= config.votes_to_accept();
    return out;
}

inline VoteOutcome tally_votes(const Proposal& proposal, const Configuration& config) {
    return tally_votes(proposal.increments(), config);
}

/// Per-participant yes/no votes, in proposal order.
inline std::vector<bool> individual_votes(std::span<const double> increments, const Configuration& config) {
    const VoteOutcome outcome = tally_votes(increments, config);
    std::vector<bool> votes(increments.size());
    for (std::size_t i = 0; i < increments.size(); ++i) {
        votes[i] = i < static_cast<std::size_t>(config.ell()) ? increments[i] > 0.0 : outcome.group_yes;
    }
    return votes;
}

/// Adds the proposal to the capitals iff it was accepted.
inline void apply_step(std::span<double> capitals, const VoteOutcome& outcome, std::span<const double> increments) {
    if (capitals.size() != increments.size()) {
        throw ValidationError("capitals", "length must equal the proposal length");
    }
    if (!outcome.accepted) return;
    for (std::size_t i = 0; i < capitals.size(); ++i) capitals[i] += increments[i];
}

inline std::vector<double> apply_step(std::vector<double> capitals, const VoteOutcome& outcome,
                                      const Proposal& proposal) {
    apply_step(std::span<double>(capitals), outcome, proposal.increments());
    return capitals;
}

}  // namespace vise
