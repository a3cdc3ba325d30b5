#pragma once

// Scalar building blocks for the voting model: the standard normal density and
// distribution function, binomial probabilities and upper tails, and the mean
// of a normal variable truncated from below.
//
// Everything here is a pure function of its arguments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace vise {

/// A probability in [0, 1].
class Probability {
public:
    constexpr Probability() = default;
    explicit Probability(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw std::domain_error("probability outside [0, 1]: " + std::to_string(value));
        }
    }

    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }
    Probability complement() const { return Probability(1.0 - value_); }

private:
    double value_ = 0.0;
};

/// Neumaier's variant of Kahan compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(what) + ": non-finite argument");
    }
}

/// Smallest vote count strictly greater than `xi`, i.e. floor(xi) + 1, clamped
/// to [0, ell + 1] so that huge thresholds do not overflow.
inline std::int64_t votes_needed(double xi, std::int64_t ell) {
    if (std::isnan(xi)) {
        throw std::domain_error("vote threshold is NaN");
    }
    if (xi < 0.0) {
        return 0;
    }
    if (xi >= static_cast<double>(ell)) {
        return ell + 1;
    }
    return static_cast<std::int64_t>(std::floor(xi)) + 1;
}

/// log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)], the Stirling remainder.
inline double stirling_error(double n) {
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    if (n <= 15.0) {
        const long double m = n;
        const long double log_sqrt_2pi = 0.918938533204672741780329736405617639861L;
        return static_cast<double>(std::lgamma(m + 1.0L) - (m + 0.5L) * std::log(m) + m - log_sqrt_2pi);
    }
    const double nn = n * n;
    if (n > 500.0) return (s0 - s1 / nn) / n;
    if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
    if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

/// Deviance term x log(x / np) + np - x, evaluated without cancellation.
inline double binomial_deviance(double x, double np) {
    if (std::abs(x - np) < 0.1 * (x + np)) {
        double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

/// log b(x | ell) with p and q = 1 - p supplied separately (Loader's saddle
/// point expansion; relative error near machine precision for any ell).
inline double log_binomial_pmf(std::int64_t x, std::int64_t ell, double p, double q) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (x < 0 || x > ell) return neg_inf;
    if (p == 0.0) return x == 0 ? 0.0 : neg_inf;
    if (q == 0.0) return x == ell ? 0.0 : neg_inf;
    const double n = static_cast<double>(ell);
    if (x == 0) {
        if (ell == 0) return 0.0;
        return p < 0.1 ? -binomial_deviance(n, n * q) - n * p : n * std::log(q);
    }
    if (x == ell) {
        return q < 0.1 ? -binomial_deviance(n, n * p) - n * q : n * std::log(p);
    }
    const double k = static_cast<double>(x);
    const double lc = stirling_error(n) - stirling_error(k) - stirling_error(n - k) -
                      binomial_deviance(k, n * p) - binomial_deviance(n - k, n * q);
    const double lf = std::log(2.0 * std::numbers::pi) + std::log(k) + std::log1p(-k / n);
    return lc - 0.5 * lf;
}

}  // namespace detail

/// Threshold and population of an upper binomial tail: P(more than xi of ell
/// independent trials succeed), each with success probability p.
struct TailSpec {
    double xi = 0.0;
    std::int64_t ell = 1;
    Probability p{0.5};

    TailSpec(double xi_, std::int64_t ell_, Probability p_) : xi(xi_), ell(ell_), p(p_) {
        if (ell < 1) throw std::domain_error("TailSpec: ell must be >= 1");
        detail::require_finite(xi, "TailSpec xi");
    }
};

/// exp(-x^2/2) / sqrt(2 pi).
inline double std_normal_pdf(double x) {
    detail::require_finite(x, "std_normal_pdf");
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

/// Standard normal distribution function, 0.5 * erfc(-x / sqrt 2).
///
/// erfc is the C library's (glibc: under 2 ulp). Rounding of x / sqrt 2 adds at
/// most phi(x) * |x| * 2^-53 < 3e-17, so the absolute error stays below 1e-15
/// on |x| <= 8 and the relative error stays small deep into the lower tail.
/// The test suite pins the absolute error at 1e-12 against an independent
/// long-double series.
inline Probability std_normal_cdf(double x) {
    detail::require_finite(x, "std_normal_cdf");
    return Probability(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

/// Binomial probability b(x | ell) = C(ell, x) p^x q^(ell - x), evaluated in
/// log space.
inline Probability binomial_pmf(std::int64_t x, std::int64_t ell, Probability p) {
    if (ell < 0 || x < 0 || x > ell) {
        throw std::domain_error("binomial_pmf: need 0 <= x <= ell");
    }
    return Probability(std::exp(detail::log_binomial_pmf(x, ell, p, 1.0 - p)));
}

/// All probabilities of one binomial law together with its upper tails
/// P(X >= k), accumulated from the top with compensated summation.
class BinomialTails {
public:
    BinomialTails(std::int64_t ell, double p, double q)
        : ell_(checked_size(ell)), pmf_(ell + 1), upper_(ell + 2, 0.0) {
        for (std::int64_t x = 0; x <= ell; ++x) {
            pmf_[x] = std::exp(detail::log_binomial_pmf(x, ell, p, q));
        }
        CompensatedSum acc;
        for (std::int64_t x = ell; x >= 0; --x) {
            acc.add(pmf_[x]);
            upper_[x] = std::min(1.0, acc.value());
        }
    }
    BinomialTails(std::int64_t ell, Probability p) : BinomialTails(ell, p.value(), 1.0 - p.value()) {}

    std::int64_t ell() const noexcept { return ell_; }

    /// b(x | ell); zero outside the support.
    double pmf(std::int64_t x) const noexcept { return (x < 0 || x > ell_) ? 0.0 : pmf_[x]; }

    /// P(X >= k); 1 for k <= 0 and 0 for k > ell.
    double at_least(std::int64_t k) const noexcept {
        if (k <= 0) return 1.0;
        if (k > ell_) return 0.0;
        return upper_[k];
    }

    /// P(X > xi) = P(X >= floor(xi) + 1).
    double more_than(double xi) const { return at_least(detail::votes_needed(xi, ell_)); }

    /// P(lo <= X < hi), summed directly so a gap between two tails near 1 keeps its precision.
    double between(std::int64_t lo, std::int64_t hi) const noexcept {
        lo = std::max<std::int64_t>(lo, 0);
        hi = std::min<std::int64_t>(hi, ell_ + 1);
        CompensatedSum acc;
        for (std::int64_t x = lo; x < hi; ++x) acc.add(pmf_[x]);
        return std::min(1.0, acc.value());
    }

private:
    static std::int64_t checked_size(std::int64_t ell) {
        if (ell < 0) throw std::domain_error("BinomialTails: ell must be >= 0");
        return ell;
    }

    std::int64_t ell_;
    std::vector<double> pmf_;
    std::vector<double> upper_;
};

/// Exact upper tail F_xi = sum_{x = floor(xi) + 1}^{ell} b(x | ell).
inline Probability binomial_upper_tail(const TailSpec& spec) {
    const std::int64_t k = detail::votes_needed(spec.xi, spec.ell);
    if (k <= 0) return Probability(1.0);
    if (k > spec.ell) return Probability(0.0);
    const double p = spec.p;
    const double q = 1.0 - p;
    CompensatedSum acc;
    for (std::int64_t x = spec.ell; x >= k; --x) {
        acc.add(std::exp(detail::log_binomial_pmf(x, spec.ell, p, q)));
    }
    return Probability(std::min(1.0, acc.value()));
}

/// Continuity-corrected normal approximation of the same tail,
/// F(-(floor(xi) + 0.5 - p ell) / sqrt(p q ell)). Requires 0 < p < 1.
inline Probability binomial_upper_tail_normal_approx(const TailSpec& spec) {
    const double p = spec.p;
    if (p <= 0.0 || p >= 1.0) {
        throw std::domain_error("binomial_upper_tail_normal_approx: p must lie in (0, 1)");
    }
    const double ell = static_cast<double>(spec.ell);
    const double z = -(std::floor(spec.xi) + 0.5 - p * ell) / std::sqrt(p * (1.0 - p) * ell);
    return std_normal_cdf(z);
}

/// Mean of N(mu, sigma^2) conditioned on exceeding t:
/// mu + sigma f(z) / F(z) with z = (mu - t) / sigma.
///
/// t may be -infinity (no truncation). Throws std::overflow_error once F(z)
/// leaves the normal double range, where the ratio is no longer meaningful.
inline double truncated_normal_mean(double mu, double sigma, double t) {
    detail::require_finite(mu, "truncated_normal_mean mu");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::domain_error("truncated_normal_mean: sigma must be positive and finite");
    }
    if (std::isnan(t)) throw std::domain_error("truncated_normal_mean: t is NaN");
    if (t == -std::numeric_limits<double>::infinity()) return mu;
    if (t == std::numeric_limits<double>::infinity()) {
        throw std::overflow_error("truncated_normal_mean: truncation point is +infinity");
    }
    const double z = (mu - t) / sigma;
    const double tail = std_normal_cdf(z);
    if (tail < std::numeric_limits<double>::min()) {
        throw std::overflow_error("truncated_normal_mean: F((mu - t) / sigma) underflows at z = " +
                                  std::to_string(z));
    }
    return mu + sigma * std_normal_pdf(z) / tail;
}

}  // namespace vise
