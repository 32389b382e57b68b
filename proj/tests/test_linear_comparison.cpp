#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kpp_lab/linear_comparison.hpp"
#include "oracles/bessel_series.hpp"

using namespace kpp_lab;
using std::numbers::pi;

TEST(CylinderZero, HalfIntegerOrders) {
    EXPECT_NEAR(cylinder_first_zero(-0.5), pi / 2, 1e-11);
    EXPECT_NEAR(cylinder_first_zero(0.5), pi, 1e-11);
}

TEST(CylinderZero, IntegerOrdersMatchTables) {
    EXPECT_NEAR(cylinder_first_zero(0.0), oracle::kJ0First, 1e-11);
    EXPECT_NEAR(cylinder_first_zero(1.0), oracle::kJ1First, 1e-11);
    EXPECT_NEAR(cylinder_first_zero(2.0), oracle::kJ2First, 1e-11);
}

TEST(CylinderZero, SeriesOracleAgrees) {
    EXPECT_NEAR(oracle::bessel_first_zero_series(0.0), oracle::kJ0First, 1e-13);
    for (int d = 1; d <= 10; ++d) {
        const double nu = 0.5 * (d - 2);
        EXPECT_NEAR(cylinder_first_zero(nu), oracle::bessel_first_zero_series(nu), 1e-10) << "nu=" << nu;
    }
}

TEST(CylinderZero, RejectsLowOrder) { EXPECT_THROW(cylinder_first_zero(-0.6), InputError); }

TEST(Rho, Examples) {
    EXPECT_NEAR(rho(1.0, 1).rho, pi / 2, 1e-11);
    EXPECT_NEAR(rho(2.0, 3).rho, pi / std::sqrt(2.0), 1e-11);
    EXPECT_NEAR(rho(1.0, 2).rho, oracle::kJ0First, 1e-11);
    const auto rec = rho(2.0, 3);
    EXPECT_EQ(rec.method, RhoMethod::ClosedForm);
    EXPECT_EQ(rec.dimension, 3);
    EXPECT_DOUBLE_EQ(rec.slope, 2.0);
    EXPECT_DOUBLE_EQ(rec.bessel_order, 0.5);
}

TEST(Rho, RejectsBadInput) {
    EXPECT_THROW(rho(0.0, 3), InputError);
    EXPECT_THROW(rho(1.0, 0), InputError);
}

TEST(EigenvalueOfBall, Examples) {
    EXPECT_NEAR(eigenvalue_of_ball(pi, 3), 1.0, 1e-11);
    EXPECT_NEAR(eigenvalue_of_ball(pi / 2, 1), 1.0, 1e-11);
    EXPECT_NEAR(eigenvalue_of_ball(rho(0.37, 4).rho, 4), 0.37, 1e-12);
    EXPECT_THROW(eigenvalue_of_ball(0.0, 3), InputError);
}

TEST(Properties, EigenvalueRoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> log_m(-3.0, 3.0);
    for (int d = 1; d <= 10; ++d) {
        for (int k = 0; k < 5; ++k) {
            const double m = std::exp(log_m(rng));
            EXPECT_NEAR(eigenvalue_of_ball(rho(m, d).rho, d) / m, 1.0, 1e-10) << "d=" << d << " m=" << m;
        }
    }
}

TEST(Properties, InverseSquareRootScaling) {
    for (int d = 1; d <= 10; ++d)
        for (double m : {0.1, 1.0, 4.5})
            EXPECT_NEAR(rho(4 * m, d).rho / (rho(m, d).rho / 2), 1.0, 1e-10);
}

TEST(Properties, NumericMatchesClosedForm) {
    for (double m : {0.5, 1.0, 2.0}) {
        for (int d : {1, 2, 3, 5}) {
            const auto closed = rho(m, d, RhoMethod::ClosedForm);
            const auto numeric = rho(m, d, RhoMethod::Numeric);
            EXPECT_EQ(numeric.method, RhoMethod::Numeric);
            EXPECT_LE(std::abs(numeric.rho - closed.rho) / closed.rho, 1e-8) << "m=" << m << " d=" << d;
        }
    }
}
