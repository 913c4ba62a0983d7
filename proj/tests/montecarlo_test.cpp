#include <cmath>

#include <gtest/gtest.h>

#include "mapstat/egf.hpp"
#include "mapstat/exact_enum.hpp"
#include "mapstat/montecarlo.hpp"
#include "mapstat/report.hpp"

namespace mapstat {
namespace {

void expect_within_se(const Estimate& e, double target, double k = 4.0) {
    EXPECT_LE(std::abs(e.point - target), k * e.std_error)
        << "point " << e.point << " target " << target << " se " << e.std_error;
}

void expect_well_formed(const Estimate& e) {
    EXPECT_LE(e.ci_low, e.point);
    EXPECT_GE(e.ci_high, e.point);
    EXPECT_GE(e.std_error, 0.0);
    EXPECT_LE(e.effective_trials, e.trials);
}

TEST(EstimateMoments, SingleVertexIsExact) {
    const MomentReport m = estimate_moments(1, 50, RandomStream(1, 0), 2, 2);
    EXPECT_EQ(m.mean_mu_over_n.point, 1.0);
    EXPECT_EQ(m.mean_mu_over_n.std_error, 0.0);
    EXPECT_EQ(m.mean_tau_over_n[0].point, 1.0);
    EXPECT_EQ(m.mean_tau_over_n[1].point, 0.0);
}

TEST(EstimateMoments, TwoVertices) {
    const MomentReport m = estimate_moments(2, 100000, RandomStream(7, 0), 2, 2);
    expect_within_se(m.mean_mu_over_n, 7.0 / 8.0);
    expect_within_se(m.mean_tau_over_n[0], 3.0 / 4.0);
    expect_within_se(m.mean_tau_over_n[1], 1.0 / 4.0);
    expect_within_se(m.mean_mu_sq_over_n_sq, 13.0 / 16.0);
}

TEST(EstimateMoments, EcdfShapeAndInvariants) {
    const MomentReport m = estimate_moments(50, 3000, RandomStream(9, 0), 3, 3);
    for (const auto& cdfs : {m.ecdf_mu_r, m.ecdf_tau_s}) {
        for (const auto& f : cdfs) {
            ASSERT_EQ(f.size(), kEcdfPoints);
            EXPECT_DOUBLE_EQ(f.back(), 1.0);
            for (std::size_t i = 1; i < f.size(); ++i) ASSERT_LE(f[i - 1], f[i]);
        }
    }
    EXPECT_EQ(m.ecdf_mu_r[0][0], 0.0);
    for (std::size_t s = 1; s < m.mean_tau_over_n.size(); ++s)
        EXPECT_LE(m.mean_tau_over_n[s].point, m.mean_tau_over_n[s - 1].point);
    EXPECT_LE(m.mean_tau_over_n[0].point, m.mean_mu_over_n.point);
}

TEST(EstimateMoments, ZeroTrialsRejected) {
    EXPECT_THROW(estimate_moments(5, 0, RandomStream(1, 0), 1, 1), InvalidConfig);
}

TEST(EstimateConditional, SingleVertex) {
    const Estimate e = estimate_conditional_ps(1, 200, 1, RandomStream(3, 0));
    EXPECT_EQ(e.point, 1.0);
    EXPECT_EQ(e.effective_trials, 200u);
}

TEST(EstimateConditional, TwoVerticesSecondTree) {
    // Exact: E(tau_2 [t_2 in m]) / E(mu) = (1/4) / (7/4).
    const Estimate e = estimate_conditional_ps(2, 100000, 2, RandomStream(7, 0));
    expect_within_se(e, 1.0 / 7.0);
    expect_well_formed(e);
}

TEST(EstimateConditional, DegenerateConditionIsReported) {
    // With a single trial the sampled vertex misses the largest component
    // for some seeds (n = 2, T = (1,2), v = 2).
    bool found = false;
    for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
        SimulationConfig cfg{.n = 2, .trials = 1, .seed = seed, .s_max = 1, .r_max = 1};
        if (!simulate(cfg).conditional[0]) {
            found = true;
            EXPECT_THROW(estimate_conditional_ps(2, 1, 1, RandomStream(seed, 0)), DegenerateCondition);
        }
    }
    EXPECT_TRUE(found);
}

TEST(EstimateRatio, SingleVertexAndTwoVertices) {
    EXPECT_EQ(estimate_ratio_ps(1, 10, 1, RandomStream(1, 0)).point, 1.0);
    const Estimate e = estimate_ratio_ps(2, 100000, 1, RandomStream(7, 0));
    expect_within_se(e, 6.0 / 7.0);
    expect_well_formed(e);
}

TEST(EstimateSubgraph, SmallCases) {
    EXPECT_EQ(estimate_subgraph_prob(1, 10, 1, RandomStream(1, 0)).point, 1.0);
    // The tie rule puts the largest tree in the largest component for n = 2.
    const Estimate e1 = estimate_subgraph_prob(2, 100000, 1, RandomStream(7, 0));
    EXPECT_EQ(e1.point, 1.0);
    const Estimate e2 = estimate_subgraph_prob(2, 100000, 2, RandomStream(7, 0));
    expect_within_se(e2, 0.25);
}

TEST(EstimatePair, TwoVertices) {
    const PairEstimate p = estimate_pair_conditional(2, 100000, RandomStream(7, 0));
    expect_within_se(p.conditional, 1.0 / 3.0);
    expect_within_se(p.moment_ratio, 1.0 / 3.0);
    EXPECT_THROW(estimate_pair_conditional(1, 10, RandomStream(7, 0)), InvalidSize);
}

TEST(EstimatePair, ThreeVerticesMatchesEnumeration) {
    const double exact = to_double(enumerate_all(3, 2, 1).pair_conditional());
    const PairEstimate p = estimate_pair_conditional(3, 100000, RandomStream(13, 0));
    expect_within_se(p.conditional, exact);
    expect_within_se(p.moment_ratio, exact);
}

TEST(EstimatePair, IndicatorAndMomentFormsAgree) {
    const PairEstimate p = estimate_pair_conditional(1000, 4000, RandomStream(21, 0));
    const double combined = std::hypot(p.conditional.std_error, p.moment_ratio.std_error);
    EXPECT_LE(std::abs(p.conditional.point - p.moment_ratio.point), 3 * combined);
}

TEST(Simulate, ConditionalMatchesEnumerationSmallN) {
    for (std::size_t n = 1; n <= 7; ++n) {
        const ExactTable t = enumerate_all(n, 3, 1);
        SimulationConfig cfg{.n = n, .trials = 100000, .seed = 100 + n, .s_max = 3, .r_max = 1};
        const SimulationReport rep = simulate(cfg);
        for (std::size_t s = 1; s <= 3; ++s) {
            const double exact = to_double(t.conditional(s));
            ASSERT_TRUE(rep.conditional[s - 1]);
            const Estimate& e = *rep.conditional[s - 1];
            if (e.std_error == 0.0) {
                EXPECT_DOUBLE_EQ(e.point, exact) << n << "," << s;
            } else {
                EXPECT_LE(std::abs(e.point - exact), 4 * e.std_error) << n << "," << s;
            }
            expect_within_se(rep.indicator_ratio[s - 1], exact);
        }
    }
}

TEST(Simulate, MomentsMatchSeriesAtModerateN) {
    const MappingSeries<ScaledArithmetic> series(300);
    SimulationConfig cfg{.n = 300, .trials = 5000, .seed = 77, .s_max = 2, .r_max = 1};
    const SimulationReport rep = simulate(cfg);
    expect_within_se(rep.moments.mean_mu_over_n, series.exact_expectation_mu(300) / 300.0);
    expect_within_se(rep.moments.mean_tau_over_n[0], series.exact_expectation_tau(300, 1) / 300.0);
}

TEST(Simulate, GapIsNonNegative) {
    SimulationConfig cfg{.n = 200, .trials = 3000, .seed = 5, .s_max = 4, .r_max = 1};
    const SimulationReport rep = simulate(cfg);
    for (std::size_t s = 0; s < 4; ++s) {
        EXPECT_GE(rep.ratio_gap[s], 0.0);
        EXPECT_LE(rep.indicator_ratio[s].point, rep.ratio[s].point);
        expect_well_formed(rep.ratio[s]);
        expect_well_formed(rep.subgraph[s]);
    }
}

TEST(Simulate, IndependentOfWorkerCount) {
    SimulationConfig cfg{.n = 64, .trials = 5000, .seed = 42, .s_max = 3, .r_max = 2};
    cfg.workers = 1;
    const auto one = report::simulation(simulate(cfg)).dump();
    cfg.workers = 3;
    const auto three = report::simulation(simulate(cfg)).dump();
    cfg.workers = 8;
    const auto eight = report::simulation(simulate(cfg)).dump();
    EXPECT_EQ(one, three);
    EXPECT_EQ(one, eight);
}

TEST(Simulate, SeedChangesDraws) {
    SimulationConfig a{.n = 64, .trials = 2000, .seed = 1};
    SimulationConfig b = a;
    b.seed = 2;
    EXPECT_NE(simulate(a).moments.mean_mu_over_n.point, simulate(b).moments.mean_mu_over_n.point);
}

TEST(Simulate, RejectsBadConfig) {
    EXPECT_THROW(simulate({.n = 0, .trials = 10}), InvalidSize);
    EXPECT_THROW(simulate({.n = 5, .trials = 10, .s_max = 0}), InvalidConfig);
    EXPECT_THROW(simulate({.n = 5, .trials = 10, .level = 1.5}), InvalidConfig);
}

TEST(EstimateHelpers, NormalQuantile) {
    EXPECT_NEAR(normal_quantile(0.99), 2.5758293035489, 1e-9);
    EXPECT_NEAR(normal_quantile(0.95), 1.9599639845401, 1e-9);
}

} // namespace
} // namespace mapstat
