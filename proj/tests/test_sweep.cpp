#include <gtest/gtest.h>

#include <cmath>

#include "vise/sweep.hpp"

using namespace vise;

namespace {

SweepSpec unfavourable_t_spec() {
    SweepSpec s;
    s.n = 100;
    s.ell = 50;
    s.alpha = 0.5;
    s.mu = -1.0;
    s.sigma = 10.0;
    s.axes = {{Axis::t_over_sigma, -0.2, 0.6, 0.001}};
    return s;
}

}  // namespace

TEST(GridValues, InclusiveAndRounded) {
    const auto v = grid_values(-2.0, 6.0, 0.01);
    EXPECT_EQ(v.size(), 801u);
    EXPECT_EQ(v.front(), -2.0);
    EXPECT_EQ(v.back(), 6.0);
    EXPECT_EQ(v[210], 0.1);
    EXPECT_EQ(grid_values(0.5, 0.5, 1.0).size(), 1u);
    EXPECT_THROW(grid_values(1.0, 0.0, 0.1), ValidationError);
    EXPECT_THROW(grid_values(0.0, 1.0, 0.0), ValidationError);
    EXPECT_THROW(grid_values(0.0, INFINITY, 0.1), ValidationError);
}

TEST(Sweep, SinglePointMatchesDirectCall) {
    SweepSpec s;
    s.n = 100;
    s.ell = 30;
    s.alpha = 0.5;
    s.mu = -0.1;
    s.axes = {{Axis::t_over_sigma, 0.25, 0.25, 1.0}};
    const auto table = sweep(s);
    ASSERT_EQ(table.rows.size(), 1u);
    const auto direct = expected_society_increment(validate({100, 30, 0.5, 0.25}, {-0.1, 1.0}));
    EXPECT_EQ(table.rows[0].report.society, direct.society);
    EXPECT_EQ(table.rows[0].report.egoist, direct.egoist);
}

TEST(Sweep, UnfavourableGroupAndSocietyMaxima) {
    const auto table = sweep(unfavourable_t_spec());
    std::size_t best_group = 0;
    std::size_t best_society = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (*table.rows[i].report.group_member > *table.rows[best_group].report.group_member) best_group = i;
        if (table.rows[i].report.society > table.rows[best_society].report.society) best_society = i;
    }
    EXPECT_NEAR(table.rows[best_group].t_used, 0.0, 0.01);
    EXPECT_NEAR(table.rows[best_society].t_used, 1.0, 0.2);
}

TEST(Sweep, RowOrderFirstAxisSlowest) {
    SweepSpec s;
    s.n = 20;
    s.alpha = 0.5;
    s.t = 0.0;
    s.axes = {{Axis::delta, 0.0, 1.0, 0.5}, {Axis::mu_over_sigma, -1.0, 1.0, 1.0}};
    s.workers = 3;
    const auto table = sweep(s);
    ASSERT_EQ(table.rows.size(), 9u);
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_DOUBLE_EQ(table.rows[i].delta(), 0.5 * static_cast<double>(i / 3)) << i;
        EXPECT_DOUBLE_EQ(table.rows[i].mu / table.rows[i].sigma, -1.0 + static_cast<double>(i % 3)) << i;
    }
    s.mu = 0.1;
    EXPECT_THROW(sweep(s), ValidationError);
}

TEST(Sweep, FlagsInsteadOfAborting) {
    SweepSpec s;
    s.n = 10;
    s.alpha = 0.5;
    s.mu = 0.1;
    s.t_mode = TMode::optimal;
    s.axes = {{Axis::delta, 0.0, 1.0, 0.1}};
    const auto table = sweep(s);
    ASSERT_EQ(table.rows.size(), 11u);
    EXPECT_EQ(table.rows.front().flag, RowFlag::no_egoists);
    EXPECT_EQ(table.rows.back().flag, RowFlag::no_group);
    EXPECT_EQ(table.rows.back().claims_case, ClaimsCase::degenerate);
}

TEST(Sweep, SpecConflicts) {
    SweepSpec s = unfavourable_t_spec();
    s.t = 0.0;
    EXPECT_THROW(sweep(s), ValidationError);
    s = unfavourable_t_spec();
    s.delta = 0.5;
    EXPECT_THROW(sweep(s), ValidationError);
    s = unfavourable_t_spec();
    s.t_mode = TMode::optimal;
    EXPECT_THROW(sweep(s), ValidationError);
    s = unfavourable_t_spec();
    s.axes.push_back(s.axes[0]);
    EXPECT_THROW(sweep(s), ValidationError);
}

TEST(Sweep, OptimalModeDominatesFixed) {
    SweepSpec opt;
    opt.n = 100;
    opt.alpha = 0.5;
    opt.t_mode = TMode::optimal;
    opt.axes = {{Axis::delta, 0.0, 0.99, 0.03}, {Axis::mu_over_sigma, -0.5, 0.5, 0.1}};
    const auto best = sweep(opt);
    for (double t : {-0.5, 0.0, 0.3, 2.0}) {
        SweepSpec fixed = opt;
        fixed.t_mode = TMode::fixed;
        fixed.t = t;
        const auto other = sweep(fixed);
        for (std::size_t i = 0; i < best.rows.size(); ++i) {
            if (best.rows[i].flag == RowFlag::degenerate_t0) continue;
            EXPECT_GE(best.rows[i].report.society, other.rows[i].report.society - 1e-10) << i << " " << t;
        }
    }
}

TEST(Pit, OptimalMaskIsSubsetOfZeroMask) {
    for (double alpha : {0.4, 0.5, 0.6}) {
        const auto zero = pit_region(alpha, 100, TMode::fixed);
        const auto opt = pit_region(alpha, 100, TMode::optimal);
        ASSERT_EQ(zero.cells.size(), 100u);
        ASSERT_EQ(zero.cells[0].size(), 100u);
        for (std::size_t i = 0; i < zero.cells.size(); ++i) {
            for (std::size_t j = 0; j < zero.cells[i].size(); ++j) {
                if (opt.mask(i, j)) {
                    EXPECT_TRUE(zero.mask(i, j)) << alpha << " " << i << " " << j;
                }
            }
        }
        ASSERT_TRUE(opt.delta_max.has_value());
        EXPECT_NEAR(std::round(*opt.delta_max * 100.0), *opt.delta_max * 100.0, 1e-9);
    }
}

TEST(Pit, NearlyPureEgoistSocietyGainsAtSimpleMajority) {
    // with almost no group the society behaves like pure egoists, who gain at alpha = 0.5
    const auto zero = pit_region(0.5, 100, TMode::fixed, {-0.1}, {0.0, 0.5, 0.99});
    EXPECT_GT(mu_plus(-0.1, 1.0, 99, 50.0), 0.0);
    EXPECT_FALSE(zero.mask(0, 2));
}

TEST(MaxDeltaCurve, NondecreasingForTenMembers) {
    std::vector<double> alphas;
    for (int k = 0; k < 10; ++k) alphas.push_back(k / 10.0);
    const auto curve = max_delta_curve(10, alphas);
    double prev = -1.0;
    for (const auto& p : curve) {
        const double v = p.delta_max.value_or(-1.0);
        EXPECT_GE(v, prev) << p.alpha;
        if (p.delta_max) {
            EXPECT_NEAR(*p.delta_max * 10.0, std::round(*p.delta_max * 10.0), 1e-9);
        }
        prev = v;
    }
}

TEST(ThresholdClasses, TenMembers) {
    EXPECT_EQ(threshold_class(0.41, 10), threshold_class(0.49, 10));
    EXPECT_NE(threshold_class(0.49, 10), threshold_class(0.50, 10));
    const auto classes = majority_threshold_classes(10);
    ASSERT_EQ(classes.size(), 10u);
    EXPECT_EQ(classes[4].votes, 4);
    EXPECT_DOUBLE_EQ(classes[4].lo, 0.4);
    EXPECT_DOUBLE_EQ(classes[4].hi, 0.5);
    EXPECT_THROW(majority_threshold_classes(0), ValidationError);
}

TEST(Axis, ParseRoundTrip) {
    for (Axis a : {Axis::t_over_sigma, Axis::delta, Axis::alpha, Axis::mu_over_sigma}) {
        EXPECT_EQ(parse_axis(to_string(a)), a);
    }
    EXPECT_FALSE(parse_axis("beta").has_value());
}
