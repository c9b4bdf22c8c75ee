#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "ust/error.hpp"
#include "ust/uncertain.hpp"

using ust::UncertainValue;
using ust::UncertainVector;

namespace {

void expect_relative(double expected, double actual, double tol) {
    const double scale = std::max(std::fabs(expected), 1e-300);
    EXPECT_LE(std::fabs(expected - actual) / scale, tol) << "expected " << expected << ", got " << actual;
}

}  // namespace

TEST(UncertainValue, NormalisesSignAndRejectsNonFinite) {
    const UncertainValue x(1.5, -0.25);
    EXPECT_EQ(x.uncertainty(), 0.25);
    EXPECT_FALSE(std::signbit(UncertainValue(-0.0).best()));
    EXPECT_EQ(UncertainValue(-0.0), UncertainValue(0.0));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(UncertainValue(nan, 0.0), ust::InvalidValueError);
    EXPECT_THROW(UncertainValue(1.0, inf), ust::InvalidValueError);
}

TEST(UncertainAdd, Examples) {
    const auto z = UncertainValue(2, 0.5) + UncertainValue(3, 0.1);
    EXPECT_DOUBLE_EQ(z.best(), 5.0);
    EXPECT_DOUBLE_EQ(z.uncertainty(), 0.6);

    EXPECT_EQ(UncertainValue(7.25) + UncertainValue(0.0), UncertainValue(7.25));

    const auto w = UncertainValue(1, 0.2) + UncertainValue(-1, 0.3);
    EXPECT_EQ(w.best(), 0.0);
    EXPECT_DOUBLE_EQ(w.uncertainty(), 0.5);
}

TEST(UncertainSub, UncertaintiesAdd) {
    const auto z = UncertainValue(2, 0.5) - UncertainValue(2, 0.1);
    EXPECT_EQ(z.best(), 0.0);
    EXPECT_DOUBLE_EQ(z.uncertainty(), 0.6);

    const UncertainValue x(3.7, 0.4);
    EXPECT_EQ(x - x, UncertainValue(0.0, 0.8));
    EXPECT_EQ(UncertainValue(5) - UncertainValue(3), UncertainValue(2));
}

TEST(UncertainArithmetic, OverflowIsReported) {
    const UncertainValue big(std::numeric_limits<double>::max());
    EXPECT_THROW(big + big, ust::NumericOverflowError);
    EXPECT_THROW(big - UncertainValue(-big.best()), ust::NumericOverflowError);
    EXPECT_THROW(ust::pow(big, 2), ust::NumericOverflowError);
    EXPECT_THROW(UncertainValue(1.0, big.best()) + UncertainValue(1.0, big.best()), ust::NumericOverflowError);
}

TEST(UncertainPow, Examples) {
    const auto sq = ust::pow(UncertainValue(3, 0.1), 2);
    EXPECT_EQ(sq.best(), 9.0);
    EXPECT_DOUBLE_EQ(sq.uncertainty(), 0.6);

    for (int n = 1; n <= 6; ++n) EXPECT_EQ(ust::pow(UncertainValue(1), n), UncertainValue(1)) << n;

    EXPECT_EQ(ust::pow(UncertainValue(0, 0.4), 2), UncertainValue(0, 0));
}

TEST(UncertainPow, ZeroBaseIsTheContinuousExtension) {
    EXPECT_EQ(ust::pow(UncertainValue(0, 0.4), 1), UncertainValue(0, 0.4));
    EXPECT_EQ(ust::pow(UncertainValue(0, 0.4), 3), UncertainValue(0, 0));
}

TEST(UncertainPow, MatchesRelativeFormAwayFromZero) {
    // |n| * (dx / |x|) * |x^n|
    for (double x : {-2.5, -0.3, 0.7, 4.0}) {
        for (int n : {1, 2, 3, 5}) {
            const UncertainValue v(x, 0.05);
            const auto p = ust::pow(v, n);
            const double expected = n * (0.05 / std::fabs(x)) * std::fabs(std::pow(x, n));
            expect_relative(expected, p.uncertainty(), 1e-14);
        }
    }
}

TEST(UncertainPow, RejectsNonPositiveExponent) {
    EXPECT_THROW(ust::pow(UncertainValue(2), 0), ust::UnsupportedExponentError);
    EXPECT_THROW(ust::pow(UncertainValue(2), -1), ust::UnsupportedExponentError);
}

TEST(UncertainOrder, Examples) {
    const UncertainValue x(2, 0.5);
    const UncertainValue y(2, 0.1);
    EXPECT_TRUE(x == UncertainValue(2, 0.5));
    EXPECT_FALSE(x == y);
    EXPECT_FALSE(UncertainValue(2, 0.1) == UncertainValue(3, 0.1));

    EXPECT_TRUE(y < x);
    EXPECT_TRUE(UncertainValue(1, 9) < UncertainValue(2, 0));
    EXPECT_FALSE(x < x);
}

TEST(UncertainOrder, AxiomsOnRandomTriples) {
    std::mt19937_64 rng(11);
    // A coarse grid makes equal bests and equal uncertainties common.
    std::uniform_int_distribution<int> grid(0, 4);
    auto draw = [&] { return UncertainValue(grid(rng) * 0.5, grid(rng) * 0.25); };
    for (int i = 0; i < 5000; ++i) {
        const auto a = draw();
        const auto b = draw();
        const auto c = draw();
        const int truths = (a < b) + (b < a) + (a == b);
        ASSERT_EQ(truths, 1);
        ASSERT_FALSE(a < a);
        if (a < b) ASSERT_FALSE(b < a);
        if (a < b && b < c) ASSERT_TRUE(a < c);
    }
}

TEST(Udissim, Examples) {
    const UncertainVector v{{1, 0.1}, {2, 0.2}};
    const UncertainVector u{{1, 0.1}, {1, 0.0}};
    const auto d = ust::udissim(v, u);
    EXPECT_EQ(d.best(), 1.0);
    EXPECT_DOUBLE_EQ(d.uncertainty(), 0.4);

    const UncertainVector w{{3}, {-1}, {0.5}};
    EXPECT_EQ(ust::udissim(w, w), UncertainValue(0, 0));
}

TEST(Udissim, Errors) {
    const UncertainVector a{{1}, {2}};
    const UncertainVector b{{1}};
    EXPECT_THROW(ust::udissim(a, b), ust::DimensionError);
    EXPECT_THROW(ust::udissim(UncertainVector{}, UncertainVector{}), ust::DimensionError);
}

TEST(Udissim, ReducesToSquaredEuclideanWhenCertain) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 40;
        const auto v = ust::oracle::random_vector(rng, n, false);
        const auto u = ust::oracle::random_vector(rng, n, false);
        std::vector<double> vb;
        std::vector<double> ub;
        for (std::size_t i = 0; i < n; ++i) {
            vb.push_back(v[i].best());
            ub.push_back(u[i].best());
        }
        const auto d = ust::udissim(v, u);
        expect_relative(ust::oracle::squared_euclidean(vb, ub), d.best(), 1e-12);
        EXPECT_EQ(d.uncertainty(), 0.0);
    }
}

TEST(Udissim, PropertiesOnRandomVectors) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 25;
        const auto v = ust::oracle::random_vector(rng, n, true);
        const auto u = ust::oracle::random_vector(rng, n, true);
        const auto d = ust::udissim(v, u);

        EXPECT_GE(d.best(), 0.0);
        EXPECT_GE(d.uncertainty(), 0.0);
        EXPECT_EQ(d, ust::udissim(u, v));

        const auto composed = ust::oracle::udissim_by_composition(v, u);
        expect_relative(composed.best(), d.best(), 1e-12);
        expect_relative(composed.uncertainty(), d.uncertainty(), 1e-12);
    }
}

TEST(Udissim, UncertaintyIsMonotoneInEachDelta) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 10;
        auto v = ust::oracle::random_vector(rng, n, true);
        const auto u = ust::oracle::random_vector(rng, n, true);
        const auto before = ust::udissim(v, u);
        const std::size_t i = trial % n;
        v[i] = UncertainValue(v[i].best(), v[i].uncertainty() + 0.75);
        const auto after = ust::udissim(v, u);
        EXPECT_EQ(after.best(), before.best());
        EXPECT_GE(after.uncertainty(), before.uncertainty());
    }
}
