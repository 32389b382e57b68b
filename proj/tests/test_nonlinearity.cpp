#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "kpp_lab/nonlinearity.hpp"

using namespace kpp_lab;

namespace {

Nonlinearity tabulate(double (*fn)(double), int nodes = 201) {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < nodes; ++i) {
        const double z = static_cast<double>(i) / (nodes - 1);
        s.emplace_back(z, fn(z));
    }
    return Nonlinearity::table(std::move(s));
}

std::vector<Nonlinearity> builtin_families() {
    return {Nonlinearity::kpp(1.0), Nonlinearity::kpp(2.5), Nonlinearity::logistic(2.0, 1.0, 2.0),
            Nonlinearity::logistic(1.0, 0.5, 1.5), Nonlinearity::logistic(3.0, 2.0, 3.0)};
}

}  // namespace

TEST(Evaluate, KppFormula) {
    const auto f = Nonlinearity::kpp(1.0);
    EXPECT_DOUBLE_EQ(f(0.5), 0.25);
    EXPECT_EQ(f(0.0), 0.0);
    EXPECT_EQ(f(1.0), 0.0);
}

TEST(Evaluate, LogisticAndLinear) {
    EXPECT_DOUBLE_EQ(Nonlinearity::logistic(2.0, 1.0, 2.0)(1.0), 1.0);
    EXPECT_DOUBLE_EQ(Nonlinearity::linear(3.0)(0.25), 0.75);
}

TEST(Evaluate, ExtendedDomainIsConstantBelowZero) {
    const auto f = Nonlinearity::kpp(1.0);
    EXPECT_EQ(f(-5e-4), f(0.0));
    EXPECT_EQ(f(-kExtensionWidth), 0.0);
    EXPECT_THROW((void)f(-2e-3), DomainError);
    EXPECT_THROW((void)f(1.0 + 1e-9), DomainError);
}

TEST(Evaluate, TabulatedReproducesNodes) {
    const auto f = tabulate([](double z) { return z * (1 - z); });
    EXPECT_NEAR(f(0.5), 0.25, 1e-15);
    EXPECT_NEAR(f(0.123), 0.123 * 0.877, 1e-4);
    EXPECT_EQ(f(0.0), 0.0);
}

TEST(Evaluate, TableRejectsMalformedSamples) {
    EXPECT_THROW(Nonlinearity::table({{0.0, 0.0}}), InputError);
    EXPECT_THROW(Nonlinearity::table({{0.0, 0.0}, {0.5, 1.0}}), InputError);
    EXPECT_THROW(Nonlinearity::table({{0.0, 0.0}, {0.6, 1.0}, {0.5, 1.0}, {1.0, 0.0}}), InputError);
}

TEST(Validate, KppPasses) {
    const auto r = validate_assumptions(Nonlinearity::kpp(1.0), 10000);
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.violations.empty());
    EXPECT_EQ(r.grid_size, 10000u);
    EXPECT_NEAR(r.strictness_margin, 1.0, 1e-6);  // f/z = 1 - z
}

TEST(Validate, BuiltinFamiliesPass) {
    for (const auto& f : builtin_families()) EXPECT_TRUE(validate_assumptions(f).passed()) << f.label();
}

TEST(Validate, TabulatedKppPasses) {
    EXPECT_TRUE(validate_assumptions(tabulate([](double z) { return z * (1 - z); })).passed());
}

TEST(Validate, UnimodalRatioFails) {
    const auto r = validate_assumptions(tabulate([](double z) { return z * z * (1 - z); }));
    EXPECT_FALSE(r.ratio_strictly_decreasing);
    EXPECT_FALSE(r.passed());
    EXPECT_FALSE(r.violations.empty());
}

TEST(Validate, NegativeFails) {
    const auto r = validate_assumptions(tabulate([](double z) { return -z * (1 - z); }));
    EXPECT_FALSE(r.positive_interior);
    EXPECT_FALSE(r.passed());
}

TEST(Validate, LinearFailsStrictness) {
    const auto r = validate_assumptions(Nonlinearity::linear(1.0));
    EXPECT_TRUE(r.positive_interior);
    EXPECT_FALSE(r.ratio_strictly_decreasing);
}

TEST(Validate, RejectsBadArguments) {
    EXPECT_THROW(validate_assumptions(Nonlinearity::kpp(1.0), 50), InputError);
    EXPECT_THROW(validate_assumptions(Nonlinearity::kpp(1.0), 1000, 0.0), InputError);
}

TEST(Validate, PassIffNoViolations) {
    std::vector<Nonlinearity> fs = builtin_families();
    fs.push_back(Nonlinearity::linear(1.0));
    fs.push_back(tabulate([](double z) { return z * z * (1 - z); }));
    for (const auto& f : fs) {
        const auto r = validate_assumptions(f, 500);
        EXPECT_EQ(r.passed(), r.violations.empty()) << f.label();
        EXPECT_EQ(r.passed(), r.violation_count == 0) << f.label();
    }
}

TEST(ComparisonSlope, Examples) {
    EXPECT_DOUBLE_EQ(comparison_slope(Nonlinearity::kpp(1.0), 0.5).m, 0.5);
    EXPECT_DOUBLE_EQ(comparison_slope(Nonlinearity::kpp(2.0), 0.25).m, 1.5);
    EXPECT_DOUBLE_EQ(comparison_slope(Nonlinearity::logistic(2.0, 1.0, 2.0), 0.5).m, 1.5);
}

TEST(ComparisonSlope, LinearIsRejected) {
    EXPECT_THROW(comparison_slope(Nonlinearity::linear(1.0), 0.5), InvalidNonlinearity);
}

TEST(ComparisonSlope, RejectsCenterOutsideUnitInterval) {
    EXPECT_THROW(comparison_slope(Nonlinearity::kpp(1.0), 1.0), InputError);
    EXPECT_THROW(comparison_slope(Nonlinearity::kpp(1.0), 0.0), InputError);
}

// f(u) > m(p) u on 0 < u < p for every built-in family.
TEST(ComparisonSlope, MinorantPropertyOnGrid) {
    for (const auto& f : builtin_families()) {
        for (int j = 1; j < 50; ++j) {
            const double p = j / 50.0;
            const double m = comparison_slope(f, p).m;
            for (int i = 1; i < 40; ++i) {
                const double u = p * i / 40.0;
                EXPECT_GT(f(u) - m * u, -1e-12) << f.label() << " p=" << p << " u=" << u;
                EXPECT_GT(f(u), m * u) << f.label() << " p=" << p << " u=" << u;
            }
        }
    }
}

TEST(ComparisonSlope, StrictlyDecreasingInP) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.001, 0.999);
    for (const auto& f : builtin_families()) {
        std::vector<double> ps(60);
        for (auto& p : ps) p = unit(rng);
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        for (std::size_t i = 1; i < ps.size(); ++i)
            EXPECT_LT(comparison_slope(f, ps[i]).m, comparison_slope(f, ps[i - 1]).m) << f.label();
    }
}

TEST(Kpp, Symmetric) {
    const auto f = Nonlinearity::kpp(1.7);
    for (int i = 0; i <= 100; ++i) {
        const double z = i / 100.0;
        EXPECT_NEAR(f(z), f(1.0 - z), 1e-15);
    }
}

TEST(Parse, KeyValueSpecs) {
    EXPECT_DOUBLE_EQ(parse_nonlinearity("family=kpp beta=1.0")(0.5), 0.25);
    EXPECT_DOUBLE_EQ(parse_nonlinearity("family=logistic m=2 q=1 p=2")(1.0), 1.0);
    EXPECT_DOUBLE_EQ(parse_nonlinearity("family=linear m=1")(0.3), 0.3);
    EXPECT_THROW(parse_nonlinearity("family=cubic"), InputError);
    EXPECT_THROW(parse_nonlinearity("family=kpp"), InputError);
    EXPECT_THROW(parse_nonlinearity("family=kpp beta=abc"), InputError);
    EXPECT_THROW(parse_nonlinearity("kpp"), InputError);
}

TEST(Parse, TableFile) {
    const auto path = std::filesystem::temp_directory_path() / "kpp_lab_table_test.csv";
    {
        std::ofstream out(path);
        out << "z,f\n";
        for (int i = 0; i <= 100; ++i) {
            const double z = i / 100.0;
            out << z << "," << z * (1 - z) << "\n";
        }
    }
    const auto f = parse_nonlinearity("family=table file=" + path.string());
    EXPECT_NEAR(f(0.5), 0.25, 1e-12);
    EXPECT_TRUE(validate_assumptions(f).passed());
    std::filesystem::remove(path);
    EXPECT_THROW(parse_nonlinearity("family=table file=" + path.string()), InputError);
}
