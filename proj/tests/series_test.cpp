#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mapstat/egf.hpp"
#include "mapstat/exact_enum.hpp"
#include "test_util.hpp"

namespace mapstat {
namespace {

using Exact = ExactArithmetic;
using Scaled = ScaledArithmetic;

Rational q(long num, long den) { return Rational(num, den); }

BigInt factorial(std::size_t k) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
}

BigInt power(std::size_t base, std::size_t e) {
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

TEST(TreeSeries, FirstCoefficients) {
    const auto t = tree_series<Exact>(6);
    EXPECT_EQ(t[0], 0);
    EXPECT_EQ(t[1], 1);
    EXPECT_EQ(t[2], 1);
    EXPECT_EQ(t[3], q(3, 2));
}

// k! [x^k] T counts rooted labelled trees: mappings on [k] whose only cyclic
// vertex is a single fixed point.
TEST(TreeSeries, MatchesBruteForceTreeCount) {
    const auto t = tree_series<Exact>(5);
    for (std::size_t k = 1; k <= 5; ++k) {
        std::uint64_t trees = 0;
        testing_util::for_each_mapping(k, [&](const std::vector<Vertex>& images) {
            const auto a = testing_util::naive_analysis(images);
            std::size_t cyclic = 0;
            for (bool c : a.cyclic) cyclic += c;
            trees += cyclic == 1;
        });
        EXPECT_EQ(t[k] * factorial(k), Rational(trees)) << "k = " << k;
    }
}

TEST(TreeSeries, MappingIdentity) {
    SeriesPoly<Exact> one_minus_t = tree_series<Exact>(12) * Rational(-1);
    one_minus_t[0] = 1;
    const auto inv = series_inverse(one_minus_t);
    for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(inv[n] * factorial(n), Rational(power(n, n)));
}

TEST(TreeSeries, ScaledModeIsBoundedAndDecays) {
    const auto t = tree_series<Scaled>(5000);
    for (std::size_t k = 1; k <= 5000; ++k) {
        ASSERT_LE(t[k], 1.0);
        // k^{k-1} e^{-k} / k! ~ 1 / (sqrt(2 pi) k^{3/2})
        ASSERT_LT(t[k] * std::pow(static_cast<double>(k), 1.5), 0.5);
    }
    const double k = 5000;
    EXPECT_NEAR(t[5000] * std::sqrt(2 * std::numbers::pi) * std::pow(k, 1.5), 1.0, 1e-3);
}

TEST(ConnectedSeries, CountsMatchEnumeration) {
    const auto c = connected_series<Exact>(20);
    const long expected[] = {1, 3, 17, 142};
    for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(c[k] * factorial(k), Rational(expected[k - 1]));
    for (std::size_t k = 1; k <= 20; ++k) {
        const Rational count = c[k] * factorial(k);
        EXPECT_EQ(boost::multiprecision::denominator(count), 1) << "k = " << k;
    }
    EXPECT_EQ(c[0], 0);
}

TEST(ConnectedSeries, ExpReproducesMappingCounts) {
    const auto e = series_exp(connected_series<Exact>(15));
    for (std::size_t n = 0; n <= 15; ++n) EXPECT_EQ(e[n] * factorial(n), Rational(power(n, n)));
}

TEST(ConnectedSeries, ExpLogRoundTrip) {
    const auto c = connected_series<Exact>(25);
    EXPECT_EQ(series_log(series_exp(c)), c);
    const auto cf = connected_series<Scaled>(400);
    const auto back = series_log(series_exp(cf));
    for (std::size_t k = 1; k <= 400; ++k) ASSERT_NEAR(back[k], cf[k], 1e-12 * std::abs(cf[k]) + 1e-15);
}

TEST(ConnectedSeries, ScaledAgreesWithExact) {
    const auto c = connected_series<Exact>(64);
    const auto cf = connected_series<Scaled>(64);
    for (std::size_t k = 1; k <= 64; ++k) {
        const double exact = to_double(c[k]) * std::exp(-static_cast<double>(k));
        ASSERT_NEAR(cf[k] / exact, 1.0, 1e-12) << k;
    }
}

TEST(SeriesOps, RejectInvalidConstantTerms) {
    SeriesPoly<Exact> a(3);
    a[0] = 1;
    EXPECT_THROW(series_exp(a), std::invalid_argument);
    a[0] = 2;
    EXPECT_THROW(series_log(a), std::invalid_argument);
    a[0] = 0;
    EXPECT_THROW(series_inverse(a), std::invalid_argument);
}

class MappingSeriesTest : public ::testing::Test {
protected:
    MappingSeries<Exact> exact_{16};
};

TEST_F(MappingSeriesTest, LargestComponentHandValues) {
    EXPECT_EQ(exact_.largest_component_cdf(2, 1), q(1, 4));
    EXPECT_EQ(exact_.largest_component_cdf(2, 0), 0);
    EXPECT_EQ(exact_.largest_component_cdf_table(2), (std::vector<Rational>{0, q(1, 4), 1}));
}

TEST_F(MappingSeriesTest, TotalMass) {
    for (std::size_t n = 1; n <= 12; ++n) {
        EXPECT_EQ(exact_.largest_component_cdf(n, n), 1) << n;
        EXPECT_EQ(exact_.total_mass(n), 1) << n;
    }
}

TEST_F(MappingSeriesTest, IncrementalTableMatchesDirectExp) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const auto table = exact_.largest_component_cdf_table(n);
        for (std::size_t m = 0; m <= n; ++m) {
            EXPECT_EQ(table[m], exact_.largest_component_cdf(n, m)) << n << "," << m;
            EXPECT_EQ(exact_.rth_largest_component_cdf(n, m, 1), table[m]);
        }
    }
}

TEST_F(MappingSeriesTest, SecondComponentHandValue) {
    EXPECT_EQ(exact_.rth_largest_component_cdf(2, 0, 2), q(3, 4));
}

TEST_F(MappingSeriesTest, TreeHandValues) {
    EXPECT_EQ(exact_.sth_largest_tree_cdf(2, 1, 1), q(1, 2));
    EXPECT_EQ(exact_.sth_largest_tree_cdf(2, 0, 2), q(1, 2));
    EXPECT_EQ(exact_.exact_expectation_tau(2, 1), q(3, 2));
    EXPECT_EQ(exact_.exact_expectation_tau(2, 2), q(1, 2));
    EXPECT_EQ(exact_.exact_expectation_tau(1, 2), 0);
}

TEST_F(MappingSeriesTest, ExpectationHandValues) {
    EXPECT_EQ(exact_.exact_expectation_mu(1), 1);
    EXPECT_EQ(exact_.exact_expectation_mu(2), q(7, 4));
}

TEST_F(MappingSeriesTest, TreeTotalMass) {
    for (std::size_t n = 1; n <= 10; ++n)
        for (std::size_t s = 1; s <= 3; ++s) EXPECT_EQ(exact_.sth_largest_tree_cdf(n, n, s), 1);
}

TEST_F(MappingSeriesTest, Monotonicity) {
    for (std::size_t n = 1; n <= 9; ++n) {
        const auto tau = exact_.tree_cdf_tables(n, 4);
        std::vector<std::vector<Rational>> mu;
        for (std::size_t r = 1; r <= 3; ++r) mu.push_back(exact_.rth_largest_component_cdf_table(n, r));
        for (std::size_t m = 0; m <= n; ++m) {
            for (std::size_t i = 0; i < 4; ++i) {
                EXPECT_GE(tau[i][m], 0);
                EXPECT_LE(tau[i][m], 1);
                if (m > 0) { EXPECT_LE(tau[i][m - 1], tau[i][m]); }
                if (i > 0) { EXPECT_LE(tau[i - 1][m], tau[i][m]); }
            }
            for (std::size_t i = 0; i < 3; ++i) {
                if (m > 0) { EXPECT_LE(mu[i][m - 1], mu[i][m]); }
                if (i > 0) { EXPECT_LE(mu[i - 1][m], mu[i][m]); }
            }
        }
        const auto taus = exact_.exact_expectations_tau(n, 4);
        for (const auto& e : taus) EXPECT_LE(e, exact_.exact_expectation_mu(n));
    }
}

TEST_F(MappingSeriesTest, SingleValueAndTableRoutesAgree) {
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto tables = exact_.tree_cdf_tables(n, 3);
        for (std::size_t s = 1; s <= 3; ++s)
            for (std::size_t m = 0; m <= n; ++m)
                EXPECT_EQ(tables[s - 1][m], exact_.sth_largest_tree_cdf(n, m, s));
    }
}

TEST_F(MappingSeriesTest, MatchesEnumerationUpToSix) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const ExactTable t = enumerate_all(n, 3, 2);
        EXPECT_EQ(exact_.exact_expectation_mu(n), t.mean_mu());
        for (std::size_t s = 1; s <= 3; ++s) {
            EXPECT_EQ(exact_.exact_expectation_tau(n, s), t.mean_tau(s));
            for (std::size_t m = 0; m <= n; ++m) EXPECT_EQ(exact_.sth_largest_tree_cdf(n, m, s), t.tau_cdf(s, m));
        }
        for (std::size_t r = 1; r <= 2; ++r)
            for (std::size_t m = 0; m <= n; ++m)
                EXPECT_EQ(exact_.rth_largest_component_cdf(n, m, r), t.mu_cdf(r, m));
    }
}

TEST_F(MappingSeriesTest, TruncationTooShort) {
    EXPECT_THROW(exact_.largest_component_cdf(17, 3), TruncationTooShort);
    EXPECT_THROW(exact_.sth_largest_tree_cdf(17, 3, 1), TruncationTooShort);
    EXPECT_THROW(exact_.exact_expectation_mu(17), TruncationTooShort);
    EXPECT_THROW(exact_.exact_expectation_tau(20, 1), TruncationTooShort);
    EXPECT_THROW(exact_.rth_largest_component_cdf(17, 1, 2), TruncationTooShort);
}

TEST(ModeAgreement, ScaledMatchesRationalUpTo64) {
    const MappingSeries<Exact> exact(64);
    const MappingSeries<Scaled> scaled(64);
    auto rel = [](double a, const Rational& b) {
        const double bd = to_double(b);
        return bd == 0.0 ? std::abs(a) : std::abs(a - bd) / std::abs(bd);
    };
    for (std::size_t n : {1u, 2u, 7u, 16u, 33u, 64u}) {
        EXPECT_LE(rel(scaled.exact_expectation_mu(n), exact.exact_expectation_mu(n)), 1e-10) << n;
        const auto te = exact.exact_expectations_tau(n, 3);
        const auto ts = scaled.exact_expectations_tau(n, 3);
        for (std::size_t s = 0; s < 3; ++s) EXPECT_LE(rel(ts[s], te[s]), 1e-10) << n << "," << s;
        const auto ce = exact.largest_component_cdf_table(n);
        const auto cs = scaled.largest_component_cdf_table(n);
        for (std::size_t m = 0; m <= n; ++m) EXPECT_LE(rel(cs[m], ce[m]), 1e-10) << n << "," << m;
    }
    for (std::size_t m = 0; m <= 20; ++m) {
        EXPECT_LE(rel(scaled.rth_largest_component_cdf(20, m, 2), exact.rth_largest_component_cdf(20, m, 2)),
                  1e-10);
    }
}

TEST(ScaledSeries, NormalizerApproachesStirling) {
    for (std::size_t n : {100u, 1000u, 100000u}) {
        const double nd = static_cast<double>(n);
        const double ratio =
            std::exp(ScaledArithmetic::log_normalizer(n)) / std::sqrt(2 * std::numbers::pi * nd);
        EXPECT_NEAR(ratio, 1.0, 1.0 / (10.0 * nd));
    }
}

TEST(ScaledSeries, TotalMassAtLargeN) {
    const MappingSeries<Scaled> s(2000);
    EXPECT_NEAR(s.total_mass(2000), 1.0, 1e-10);
    const auto table = s.largest_component_cdf_table(2000);
    EXPECT_NEAR(table.back(), 1.0, 1e-10);
    EXPECT_NEAR(s.sth_largest_tree_cdf(2000, 2000, 2), 1.0, 1e-10);
}

} // namespace
} // namespace mapstat
