#pragma once

// Independent reference computations used only by tests. None of these share
// code with the library paths they check.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace vise::oracle {

using Rational = boost::multiprecision::cpp_rational;

/// The exact rational value of a double.
inline Rational exact(double x) {
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    Rational r(scaled);
    exponent -= 53;
    boost::multiprecision::cpp_int two_pow = 1;
    two_pow <<= std::abs(exponent);
    return exponent >= 0 ? r * Rational(two_pow) : r / Rational(two_pow);
}

inline boost::multiprecision::cpp_int choose(int n, int k) {
    boost::multiprecision::cpp_int c = 1;
    for (int i = 1; i <= k; ++i) {
        c *= n - k + i;
        c /= i;
    }
    return c;
}

/// b(x | n) in exact rational arithmetic for the exact double p.
inline Rational binomial_pmf(int x, int n, double p) {
    const Rational rp = exact(p);
    const Rational rq = Rational(1) - rp;
    Rational px = 1;
    Rational qx = 1;
    for (int i = 0; i < x; ++i) px *= rp;
    for (int i = 0; i < n - x; ++i) qx *= rq;
    return Rational(choose(n, x)) * px * qx;
}

/// P(X >= k), exact.
inline Rational binomial_at_least(int k, int n, double p) {
    Rational s = 0;
    for (int x = std::max(k, 0); x <= n; ++x) s += binomial_pmf(x, n, p);
    return s;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Standard normal CDF via the Taylor series
/// F(x) = 1/2 + f(x) sum_k x^(2k+1) / (1 * 3 * ... * (2k+1)), in long double.
inline long double normal_cdf_series(long double x) {
    const long double pdf = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    long double term = x;
    long double sum = x;
    for (int k = 1; k < 2000; ++k) {
        term *= x * x / (2.0L * k + 1.0L);
        sum += term;
        if (std::abs(term) < 1e-30L * std::abs(sum)) break;
    }
    return 0.5L + pdf * sum;
}

/// Composite Simpson rule on [a, b] with `panels` (even) subintervals.
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b,
                           int panels) {
    const long double h = (b - a) / panels;
    long double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
    return s * h / 3.0L;
}

/// E[Z | Z > t] for Z ~ N(mu, sigma^2), by quadrature over [t, mu + 40 sigma].
inline long double truncated_mean_quadrature(long double mu, long double sigma, long double t) {
    auto dens = [&](long double x) {
        const long double z = (x - mu) / sigma;
        return std::exp(-0.5L * z * z);
    };
    const long double hi = std::max(t, mu) + 40.0L * sigma;
    const long double num = simpson([&](long double x) { return x * dens(x); }, t, hi, 200000);
    const long double den = simpson(dens, t, hi, 200000);
    return num / den;
}

/// mu+ for small ell by enumerating which of the other ell - 1 egoists vote
/// yes. Uses E[d | d > 0] and E[d | d <= 0] from quadrature and p from the
/// long-double series, so it shares nothing with the library's route.
inline long double mu_plus_enumerated(double mu, double sigma, int ell, double ell0) {
    const long double p = normal_cdf_series(static_cast<long double>(mu) / sigma);
    const long double q = 1.0L - p;
    const long double gain = truncated_mean_quadrature(mu, sigma, 0.0L);
    // E[d | d <= 0] from the total mean: mu = p * gain + q * loss.
    const long double loss = (mu - p * gain) / q;
    long double total = 0.0L;
    const int others = ell - 1;
    for (std::uint32_t mask = 0; mask < (1u << others); ++mask) {
        const int yes = __builtin_popcount(mask);
        const long double prob = std::pow(p, yes) * std::pow(q, others - yes);
        if (static_cast<long double>(yes + 1) > ell0) total += prob * p * gain;
        if (static_cast<long double>(yes) > ell0) total += prob * q * loss;
    }
    return total;
}

}  // namespace vise::oracle
