#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "aicg/bias.hpp"
#include "aicg/bias_t3.hpp"
#include "aicg/quadrature.hpp"

using namespace aicg;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(BiasClosed, T1Values) {
    EXPECT_EQ(bias_t1(0.0).value, 1.0);
    EXPECT_NEAR(bias_t1(2.0).value, 1.9544997361036415856, 1e-15);
    EXPECT_NEAR(bias_t1(5.0).value, 1.999999426696856241612, 1e-15);
    EXPECT_EQ(bias_t1(0.0).method, Method::ClosedForm);
    EXPECT_THROW(bias_t1(-0.1), DomainError);
}

TEST(BiasClosed, T1IsIncreasingWithinItsBounds) {
    double prev = bias_t1(0.0).value;
    for (double mu = 0.01; mu <= 10.0; mu += 0.01) {
        const double v = bias_t1(mu).value;
        EXPECT_GE(v, prev);
        EXPECT_LE(v, 2.0);
        prev = v;
    }
}

TEST(BiasClosed, HalfLinesCorollaries) {
    EXPECT_EQ(bias_halflines_at_singularity(ModelSpec::halflines({2.0 * kPi})).value, 1.0);
    EXPECT_NEAR(bias_halflines_at_singularity(ModelSpec::halflines({kPi, 2.0 * kPi})).value, 2.0, 1e-15);
    EXPECT_EQ(halflines_equal_sectors(1), 1.0);
    EXPECT_NEAR(halflines_equal_sectors(2), 2.0, 1e-15);
    EXPECT_NEAR(halflines_equal_sectors(3), t3_singular_value(), 1e-15);
    EXPECT_NEAR(halflines_equal_sectors(10000), 4.0, 1e-6);
    const auto three = ModelSpec::halflines({2.0 * kPi / 3.0, 4.0 * kPi / 3.0, 2.0 * kPi});
    EXPECT_NEAR(bias_halflines_at_singularity(three).value, t3_singular_value(), 1e-12);
}

TEST(BiasClosed, HalfLinesBranchesAgreeAtPi) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const int extra = 1 + rep % 5;
        std::vector<double> w(static_cast<std::size_t>(extra));
        double s = 0.0;
        for (auto& x : w) s += (x = u(gen) + 0.01);
        std::vector<double> sectors{kPi};
        for (double x : w) sectors.push_back(x / s * kPi);
        EXPECT_NEAR(halflines_small_first_sector(sectors), halflines_large_first_sector(sectors), 1e-12);
    }
}

TEST(BiasClosed, RegularModelsAndAic) {
    EXPECT_EQ(bias_constant(ModelSpec::polytomy()).value, 0.0);
    EXPECT_EQ(bias_constant(ModelSpec::unconstrained()).value, 4.0);
    EXPECT_EQ(bias_aic(ModelSpec::t3()).value, 2.0);
    EXPECT_EQ(bias_aic(ModelSpec::unconstrained()).value, 4.0);
    EXPECT_EQ(bias_aic(ModelSpec::polytomy()).value, 0.0);
    EXPECT_THROW(bias_constant(ModelSpec::t3()), std::invalid_argument);
    EXPECT_DOUBLE_EQ(bias_t1(1.0).effective_parameters(), 0.5 * bias_t1(1.0).value);
}

TEST(BiasClosed, MethodTagsRoundTrip) {
    for (Method m : {Method::ClosedForm, Method::Quadrature, Method::MonteCarlo, Method::PlugIn,
                     Method::LowerLeastFavorable, Method::UpperLeastFavorable, Method::UniformlyOutperforming,
                     Method::Minimax, Method::Consistent, Method::Bootstrap, Method::Aic, Method::CrudeLower,
                     Method::CrudeUpper}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_EQ(parse_method("plugin"), Method::PlugIn);
    EXPECT_THROW(parse_method("bic"), std::invalid_argument);
}

// Oracle: direct 2-D integration of 2 (z - mu).(P(z) - mu) N(z; mu, I) over the plane
// with scipy, cone angles from n = 1e6.
TEST(BiasT3, MatchesIndependentPlaneIntegration) {
    const std::pair<double, double> oracle[] = {
        {0.5, 2.8116258169052335}, {1.0, 2.720577228366529}, {1.5, 2.5443814902090955},
        {2.0, 2.3403472895294035}, {3.0, 2.072803027429118}, {5.0, 2.000296397595196}};
    for (const auto& [mu, expected] : oracle) {
        const GeometryParams g = GeometryParams::from_mu0y(mu, 1e6);
        const BiasEstimate b = bias_t3(mu, g.alpha0);
        EXPECT_NEAR(b.value, expected, 1e-8) << mu;
        EXPECT_EQ(b.method, Method::Quadrature);
    }
}

TEST(BiasT3, SingularValue) {
    const BiasEstimate b = bias_t3(0.0, kPi / 6.0);
    EXPECT_NEAR(b.value, 2.0 + 3.0 * std::sqrt(3.0) / (2.0 * kPi), 1e-9);
    EXPECT_NEAR(t3_singular_value(), 2.8269933431326880743, 1e-15);
}

TEST(BiasT3, PartsSumToTheTotal) {
    const T3Parts p = bias_t3_parts(1.2, 0.5);
    EXPECT_NEAR(p.vertical_region + p.lower_region, bias_t3(1.2, 0.5).value, 1e-12);
    EXPECT_GE(p.error_estimate, 0.0);
}

TEST(BiasT3, ApproachesTwoFarFromTheSingularity) {
    const GeometryParams g = GeometryParams::from_mu0y(8.0, 1e6);
    EXPECT_NEAR(bias_t3(8.0, g.alpha0).value, 2.0, 1e-8);
}

TEST(BiasT3, TighterToleranceAgrees) {
    QuadratureSettings tight;
    tight.abs_tol = 1e-11;
    const double a = bias_t3(2.5, 0.4).value;
    const double b = bias_t3(2.5, 0.4, tight).value;
    EXPECT_NEAR(a, b, 1e-8);
}

TEST(BiasT3, RejectsBadSettings) {
    QuadratureSettings bad;
    bad.abs_tol = 0.0;
    EXPECT_THROW(bias_t3(1.0, 0.5, bad), std::invalid_argument);
    EXPECT_THROW(bias_t3(-1.0, 0.5), DomainError);
}

TEST(BiasT3, TableInterpolatesDirectQuadrature) {
    const T3BiasTable& table = T3BiasTable::for_sample_size(1e6);
    EXPECT_EQ(&table, &T3BiasTable::for_sample_size(1e6));
    for (double mu : {0.0, 0.013, 0.77, 1.5, 2.345, 4.999, 11.5}) {
        const GeometryParams g = GeometryParams::from_mu0y(mu, 1e6);
        EXPECT_NEAR(table(mu), bias_t3(mu, g.alpha0).value, 2e-7) << mu;
    }
    EXPECT_NEAR(table(40.0), 2.0, 1e-12);
}
