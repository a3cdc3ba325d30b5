#pragma once

// Closed-form one-step expected capital increments of an egoist, a group
// member, and a randomly selected participant.
//
// Notation used in comments: p = F(mu / sigma) is the chance that one egoist
// gains; F_xi = P(more than xi egoists vote yes); P = F((mu - t) sqrt(g) / sigma)
// is the chance the group supports a proposal and Q = 1 - P.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "vise/error.hpp"
#include "vise/model.hpp"
#include "vise/special_functions.hpp"

namespace vise {

namespace detail {

/// mu+ given the binomial laws of ell and ell - 1 egoists.
///
/// For a designated egoist, X = 1{d > 0} + Y with Y ~ Bin(ell - 1, p). Splitting
/// on the sign of d and using E[d | d > 0] = mu + sigma f / p,
/// E[d | d <= 0] = mu - sigma f / q gives
///   E[d 1{X >= k}] = mu P(X >= k) + sigma f(mu / sigma) b(k - 1 | ell - 1),
/// which equals sum_{x >= k} b(x | ell) [mu + sigma f (x - ell p) / (ell p q)]
/// without dividing by p q.
inline double mu_plus_from(const BinomialTails& all, const BinomialTails& others, double mu, double sigma,
                           double density, double ell0) {
    const std::int64_t k = votes_needed(ell0, all.ell());
    if (k <= 0) return mu;
    if (k > all.ell()) return 0.0;
    return mu * all.at_least(k) + sigma * density * others.pmf(k - 1);
}

inline void require_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma", "must be positive and finite");
}

}  // namespace detail

/// Expected one-step increment of one voter among `ell` egoists when a proposal
/// passes iff strictly more than `ell0` of them vote yes.
inline double mu_plus(double mu, double sigma, std::int64_t ell, double ell0) {
    detail::require_sigma(sigma);
    if (!std::isfinite(mu)) throw ValidationError("mu", "must be finite");
    if (ell < 1) throw ValidationError("ell", "mu_plus needs at least one egoist");
    const double z = mu / sigma;
    const double p = std_normal_cdf(z);
    const double q = std_normal_cdf(-z);
    const BinomialTails all(ell, p, q);
    const BinomialTails others(ell - 1, p, q);
    return detail::mu_plus_from(all, others, mu, sigma, std_normal_pdf(z), ell0);
}

/// P (group supports) and Q = 1 - P, each evaluated directly for accuracy.
struct SupportProbability {
    Probability support;
    Probability oppose;
};

inline SupportProbability group_support_prob(const EnvironmentParams& env, std::int64_t g, double t) {
    if (g < 1) throw ValidationError("g", "group must have at least one member");
    detail::require_sigma(env.sigma);
    if (std::isnan(t)) throw ValidationError("t", "must not be NaN");
    if (std::isinf(t)) {
        return t < 0 ? SupportProbability{Probability(1.0), Probability(0.0)}
                     : SupportProbability{Probability(0.0), Probability(1.0)};
    }
    const double scale = std::sqrt(static_cast<double>(g)) / env.sigma;
    return {std_normal_cdf((env.mu - t) * scale), std_normal_cdf((t - env.mu) * scale)};
}

/// Standardized claims threshold (mu - t) sqrt(g) / sigma; +-inf for infinite t.
inline double standardized_threshold(const EnvironmentParams& env, std::int64_t g, double t) {
    return (env.mu - t) * std::sqrt(static_cast<double>(g)) / env.sigma;
}

/// The t-independent ingredients of the expected increments for one
/// configuration. Evaluating many claims thresholds against one set of terms
/// costs O(1) each.
class VotingTerms {
public:
    explicit VotingTerms(const Configuration& config)
        : n_(config.n()), ell_(config.ell()), g_(config.g()), env_(config.env()),
          gamma_votes_(config.gamma_votes()), alpha_votes_(config.alpha_votes()) {
        const double z = env_.mu / env_.sigma;
        p_ = std_normal_cdf(z);
        const double q = std_normal_cdf(-z);
        const BinomialTails all(ell_, p_, q);
        f_gamma_ = all.more_than(gamma_votes_);
        f_alpha_ = all.more_than(alpha_votes_);
        const std::int64_t k_gamma = detail::votes_needed(gamma_votes_, ell_);
        const std::int64_t k_alpha = detail::votes_needed(alpha_votes_, ell_);
        tail_gap_ = all.between(k_gamma, k_alpha);
        if (ell_ >= 1) {
            const BinomialTails others(ell_ - 1, p_, q);
            const double density = std_normal_pdf(z);
            mu_plus_gamma_ = detail::mu_plus_from(all, others, env_.mu, env_.sigma, density, gamma_votes_);
            mu_plus_alpha_ = detail::mu_plus_from(all, others, env_.mu, env_.sigma, density, alpha_votes_);
            // same split as mu_plus_from, taken term by term
            mu_plus_gap_ = -env_.mu * tail_gap_ +
                           env_.sigma * density * (others.pmf(k_alpha - 1) - others.pmf(k_gamma - 1));
        }
    }

    std::int64_t n() const noexcept { return n_; }
    std::int64_t ell() const noexcept { return ell_; }
    std::int64_t g() const noexcept { return g_; }
    double delta() const noexcept { return static_cast<double>(ell_) / static_cast<double>(n_); }
    const EnvironmentParams& env() const noexcept { return env_; }

    /// F(mu / sigma), one egoist's chance of gaining.
    double egoist_gain_prob() const noexcept { return p_; }
    /// F_{gamma n}: egoist votes suffice given group support.
    double f_gamma() const noexcept { return f_gamma_; }
    /// F_{alpha n}: egoist votes suffice without the group.
    double f_alpha() const noexcept { return f_alpha_; }
    /// F_gamma - F_alpha without cancellation.
    double tail_gap() const noexcept { return tail_gap_; }
    /// mu+_alpha - mu+_gamma without cancellation; NaN without egoists.
    double mu_plus_gap() const noexcept { return mu_plus_gap_; }
    /// mu+(mu, sigma, ell, gamma n); NaN without egoists.
    double mu_plus_gamma() const noexcept { return mu_plus_gamma_; }
    /// mu+(mu, sigma, ell, alpha n); NaN without egoists.
    double mu_plus_alpha() const noexcept { return mu_plus_alpha_; }

    /// mu+_gamma P + mu+_alpha Q. Without a group this is mu+_alpha.
    double egoist(double t) const {
        if (ell_ == 0) throw ValidationError("ell", "no egoists in the society");
        if (g_ == 0) return mu_plus_alpha_;
        const auto pq = group_support_prob(env_, g_, t);
        return mu_plus_gamma_ * pq.support + mu_plus_alpha_ * pq.oppose;
    }

    /// F_gamma (mu P + sigma f / sqrt g) + F_alpha (mu Q - sigma f / sqrt g).
    double group_member(double t) const {
        if (g_ == 0) throw ValidationError("g", "no group in the society");
        const auto pq = group_support_prob(env_, g_, t);
        const double tt = standardized_threshold(env_, g_, t);
        const double spread = std::isfinite(tt) ? env_.sigma * std_normal_pdf(tt) / std::sqrt(static_cast<double>(g_))
                                                : 0.0;
        return f_gamma_ * (env_.mu * pq.support + spread) + f_alpha_ * (env_.mu * pq.oppose - spread);
    }

    /// delta M(egoist) + (1 - delta) M(group member).
    double society(double t) const {
        if (g_ == 0) return egoist(t);
        if (ell_ == 0) return group_member(t);
        const double d = delta();
        return d * egoist(t) + (1.0 - d) * group_member(t);
    }

    /// society(a) - society(b) for finite a, b, written so the t-independent
    /// parts cancel exactly instead of in rounding.
    double society_difference(double a, double b) const {
        if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("t", "must be finite");
        if (g_ == 0) return 0.0;
        const double ua = standardized_threshold(env_, g_, a);
        const double ub = standardized_threshold(env_, g_, b);
        // the smaller tail of each side keeps its relative precision
        const double dp = (ua > 0.0 && ub > 0.0) ? std_normal_cdf(-ub) - std_normal_cdf(-ua)
                                                 : std_normal_cdf(ua) - std_normal_cdf(ub);
        const double df = std_normal_pdf(ua) - std_normal_pdf(ub);
        const double d_group = tail_gap_ * (env_.mu * dp + env_.sigma * df / std::sqrt(static_cast<double>(g_)));
        if (ell_ == 0) return d_group;
        const double d_egoist = -mu_plus_gap_ * dp;
        const double d = delta();
        return d * d_egoist + (1.0 - d) * d_group;
    }

private:
    std::int64_t n_;
    std::int64_t ell_;
    std::int64_t g_;
    EnvironmentParams env_;
    double gamma_votes_;
    double alpha_votes_;
    double p_ = 0.0;
    double f_gamma_ = 0.0;
    double f_alpha_ = 0.0;
    double mu_plus_gamma_ = std::numeric_limits<double>::quiet_NaN();
    double mu_plus_alpha_ = std::numeric_limits<double>::quiet_NaN();
    double tail_gap_ = 0.0;
    double mu_plus_gap_ = std::numeric_limits<double>::quiet_NaN();
};

/// Expected one-step capital increment of an egoist. With no group (g = 0) this
/// is the pure-egoist value mu+(mu, sigma, n, alpha n).
inline double expected_egoist_increment(const Configuration& config) {
    return VotingTerms(config).egoist(config.t());
}

/// Expected one-step capital increment of a group member (needs g >= 1).
inline double expected_group_increment(const Configuration& config) {
    return VotingTerms(config).group_member(config.t());
}

struct ExpectationReport {
    std::optional<double> egoist;        ///< undefined without egoists
    std::optional<double> group_member;  ///< undefined without a group
    double society = 0.0;
    std::optional<Probability> support_prob;  ///< P; undefined without a group
    std::optional<double> t_tilde;            ///< (mu - t) sqrt(g) / sigma
};

inline ExpectationReport report_at(const VotingTerms& terms, double t) {
    ExpectationReport r;
    const double d = terms.delta();
    if (terms.ell() > 0) r.egoist = terms.egoist(t);
    if (terms.g() > 0) {
        r.group_member = terms.group_member(t);
        r.support_prob = group_support_prob(terms.env(), terms.g(), t).support;
        r.t_tilde = standardized_threshold(terms.env(), terms.g(), t);
    }
    if (!r.group_member) {
        r.society = *r.egoist;
    } else if (!r.egoist) {
        r.society = *r.group_member;
    } else {
        r.society = d * *r.egoist + (1.0 - d) * *r.group_member;
    }
    return r;
}

/// Full one-step report; the society value is the delta-weighted average.
inline ExpectationReport expected_society_increment(const Configuration& config) {
    return report_at(VotingTerms(config), config.t());
}

}  // namespace vise
