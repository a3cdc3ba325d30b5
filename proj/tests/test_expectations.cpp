#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles/oracles.hpp"
#include "vise/expectations.hpp"

using namespace vise;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Configuration make(std::int64_t n, std::int64_t ell, double alpha, double t, double mu, double sigma) {
    return validate({n, ell, alpha, t}, {mu, sigma});
}

// The unsimplified sum over x >= k of b(x | ell) [mu + sigma f (x - ell p) / (ell p q)].
double mu_plus_sum_form(double mu, double sigma, int ell, double ell0) {
    const double p = static_cast<double>(oracle::normal_cdf_series(mu / sigma));
    const double q = 1.0 - p;
    const double f = std::exp(-0.5 * (mu / sigma) * (mu / sigma)) / std::sqrt(2.0 * M_PI);
    double s = 0.0;
    for (int x = std::max(0, static_cast<int>(std::floor(ell0)) + 1); x <= ell; ++x) {
        const double b = oracle::to_double(oracle::binomial_pmf(x, ell, p));
        s += b * (mu + sigma * f * (x - ell * p) / (ell * p * q));
    }
    return s;
}

}  // namespace

TEST(MuPlus, Edges) {
    EXPECT_EQ(mu_plus(-0.3, 2.0, 17, -0.5), -0.3);
    EXPECT_EQ(mu_plus(-0.3, 2.0, 17, -4.0), -0.3);
    EXPECT_EQ(mu_plus(0.7, 1.0, 17, 17.0), 0.0);
    EXPECT_EQ(mu_plus(0.7, 1.0, 17, 30.5), 0.0);
}

TEST(MuPlus, MatchesEnumerationOracle) {
    for (double mu : {-1.0, -0.1, 0.0, 0.4}) {
        for (int ell : {1, 2, 5, 9, 12}) {
            for (double ell0 : {-0.5, 0.0, 1.5, 3.0, 6.2, 11.0}) {
                const double want = static_cast<double>(oracle::mu_plus_enumerated(mu, 1.5, ell, ell0));
                EXPECT_NEAR(mu_plus(mu, 1.5, ell, ell0), want, 1e-10) << mu << " " << ell << " " << ell0;
            }
        }
    }
}

TEST(MuPlus, MatchesUnsimplifiedSum) {
    for (double mu : {-0.1, 0.3}) {
        for (double ell0 : {0.0, 30.0, 46.0, 52.0, 60.0}) {
            EXPECT_NEAR(mu_plus(mu, 1.0, 100, ell0), mu_plus_sum_form(mu, 1.0, 100, ell0), 1e-12) << mu << " " << ell0;
        }
    }
}

TEST(MuPlus, ExtremeMeanStaysFinite) {
    // p q underflows, which the division-free form survives
    for (double mu : {-40.0, 40.0}) {
        for (double ell0 : {-1.0, 0.0, 50.0, 99.0}) {
            const double v = mu_plus(mu, 1.0, 100, ell0);
            EXPECT_TRUE(std::isfinite(v));
        }
    }
    EXPECT_NEAR(mu_plus(40.0, 1.0, 100, 50.0), 40.0, 1e-12);
    EXPECT_NEAR(mu_plus(-40.0, 1.0, 100, 50.0), 0.0, 1e-300);
}

TEST(MuPlus, Errors) {
    EXPECT_THROW(mu_plus(0.0, 0.0, 5, 1.0), ValidationError);
    EXPECT_THROW(mu_plus(0.0, 1.0, 0, 1.0), ValidationError);
    EXPECT_THROW(mu_plus(inf, 1.0, 5, 1.0), ValidationError);
}

TEST(GroupSupportProb, SpecExamples) {
    const EnvironmentParams env{-1.0, 10.0};
    EXPECT_EQ(group_support_prob(env, 50, -1.0).support.value(), 0.5);
    EXPECT_EQ(group_support_prob(env, 50, -inf).support.value(), 1.0);
    EXPECT_EQ(group_support_prob(env, 50, inf).support.value(), 0.0);
    // F(-sqrt(50) / 10)
    EXPECT_NEAR(group_support_prob(env, 50, 0.0).support, 0.239750061131, 1e-10);
}

TEST(GroupSupportProb, SumsToOne) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 5000; ++i) {
        const EnvironmentParams env{u(gen), std::exp(u(gen))};
        const auto pq = group_support_prob(env, 1 + i % 99, u(gen) * 2.0);
        EXPECT_NEAR(pq.support + pq.oppose, 1.0, 1e-15);
    }
}

TEST(EgoistIncrement, Limits) {
    const auto c = make(100, 50, 0.5, 0.0, -1.0, 10.0);
    const VotingTerms terms(c);
    EXPECT_DOUBLE_EQ(terms.egoist(inf), mu_plus(-1.0, 10.0, 50, 50.0));
    EXPECT_DOUBLE_EQ(terms.egoist(-inf), mu_plus(-1.0, 10.0, 50, 0.0));
    EXPECT_NEAR(terms.egoist(1e6), terms.egoist(inf), 1e-15);
}

TEST(GroupIncrement, Limits) {
    const auto c = make(100, 50, 0.5, 0.0, -1.0, 10.0);
    const VotingTerms terms(c);
    EXPECT_DOUBLE_EQ(terms.group_member(inf), terms.f_alpha() * -1.0);
    EXPECT_DOUBLE_EQ(terms.group_member(-inf), terms.f_gamma() * -1.0);
    EXPECT_NEAR(terms.group_member(1e6), terms.group_member(inf), 1e-15);
}

TEST(SocietyIncrement, UnfavourableHalfGroupAtZero) {
    const auto r = expected_society_increment(make(100, 50, 0.5, 0.0, -1.0, 10.0));
    ASSERT_TRUE(r.egoist && r.group_member);
    EXPECT_GT(*r.group_member, 0.0);
    EXPECT_LT(r.society, 0.0);
    EXPECT_NEAR(r.support_prob->value(), 0.239750061131, 1e-10);
    EXPECT_NEAR(*r.t_tilde, -std::sqrt(50.0) / 10.0, 1e-15);
}

TEST(SocietyIncrement, NoGroupReport) {
    const auto r = expected_society_increment(make(100, 100, 0.5, 0.0, -0.1, 1.0));
    EXPECT_FALSE(r.group_member.has_value());
    EXPECT_FALSE(r.support_prob.has_value());
    ASSERT_TRUE(r.egoist.has_value());
    EXPECT_DOUBLE_EQ(*r.egoist, mu_plus(-0.1, 1.0, 100, 50.0));
    EXPECT_DOUBLE_EQ(r.society, *r.egoist);
}

TEST(SocietyIncrement, NoEgoistReport) {
    const auto r = expected_society_increment(make(50, 0, 0.5, 0.2, 0.1, 1.0));
    EXPECT_FALSE(r.egoist.has_value());
    ASSERT_TRUE(r.group_member.has_value());
    EXPECT_DOUBLE_EQ(r.society, *r.group_member);
}

namespace {

struct RandomConfigs {
    std::mt19937_64 gen{2024};

    Configuration next() {
        std::uniform_int_distribution<int> n_pick(1, 150);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::int64_t n = n_pick(gen);
        const std::int64_t ell = std::uniform_int_distribution<std::int64_t>(0, n)(gen);
        const double sigma = std::exp(4.0 * u(gen) - 2.0);
        const double mu = (4.0 * u(gen) - 2.0) * sigma;
        const double t = mu + (6.0 * u(gen) - 3.0) * sigma;
        return make(n, ell, u(gen), t, mu, sigma);
    }
};

}  // namespace

TEST(Properties, WeightedAverageIdentity) {
    RandomConfigs configs;
    for (int i = 0; i < 2000; ++i) {
        const auto c = configs.next();
        const auto r = expected_society_increment(c);
        if (!r.egoist || !r.group_member) continue;
        EXPECT_NEAR(r.society, c.delta() * *r.egoist + (1.0 - c.delta()) * *r.group_member, 1e-12);
    }
}

TEST(Properties, ClaimsStructureOrdersTails) {
    RandomConfigs configs;
    for (int i = 0; i < 2000; ++i) {
        const VotingTerms terms(configs.next());
        EXPECT_GE(terms.f_gamma(), terms.f_alpha());
    }
}

TEST(Properties, ScaleHomogeneity) {
    RandomConfigs configs;
    for (int i = 0; i < 500; ++i) {
        const auto c = configs.next();
        const auto base = expected_society_increment(c);
        for (double k : {0.1, 10.0}) {
            const auto scaled = expected_society_increment(
                make(c.n(), c.ell(), c.alpha(), k * c.t(), k * c.mu(), k * c.sigma()));
            const double tol = 1e-12 * k * (c.sigma() + std::abs(c.mu()));
            EXPECT_NEAR(scaled.society, k * base.society, tol);
            if (base.egoist) {
                EXPECT_NEAR(*scaled.egoist, k * *base.egoist, tol);
            }
            if (base.group_member) {
                EXPECT_NEAR(*scaled.group_member, k * *base.group_member, tol);
            }
            if (base.support_prob) {
                EXPECT_NEAR(*scaled.support_prob, *base.support_prob, 1e-12);
            }
        }
    }
}

TEST(Properties, CoalitionClassInvariance) {
    // alpha in [k/n, (k+1)/n) gives identical outputs
    for (std::int64_t ell : {0, 7, 30, 64, 100}) {
        for (std::int64_t k : {0, 29, 45, 50, 51, 88, 99}) {
            const auto base = expected_society_increment(make(100, ell, k / 100.0, 0.05, -0.1, 1.0));
            for (double frac : {0.001, 0.37, 0.5, 0.999}) {
                const auto other = expected_society_increment(make(100, ell, (k + frac) / 100.0, 0.05, -0.1, 1.0));
                EXPECT_EQ(other.society, base.society) << ell << " " << k << " " << frac;
                EXPECT_EQ(other.egoist, base.egoist);
                EXPECT_EQ(other.group_member, base.group_member);
            }
        }
    }
}

TEST(Properties, GroupMemberMaximalAtZeroClaims) {
    // supporting exactly the proposals with a positive group mean is best for the group
    for (double mu : {-1.0, -0.1, 0.2}) {
        for (std::int64_t ell : {10, 50, 80}) {
            const VotingTerms terms(make(100, ell, 0.5, 0.0, mu, 1.0));
            const double at0 = terms.group_member(0.0);
            for (double t : {-0.5, -0.05, -0.001, 0.001, 0.05, 0.5}) EXPECT_LE(terms.group_member(t), at0);
        }
    }
}
