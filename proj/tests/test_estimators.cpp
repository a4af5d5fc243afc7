#include <gtest/gtest.h>

#include <cmath>

#include "aicg/estimators.hpp"
#include "aicg/special.hpp"

using namespace aicg;

namespace {

const ModelSpec kT1 = ModelSpec::t1(1);
const ModelSpec kT3 = ModelSpec::t3();

// Counts with the T1(1) estimate at distance ~mu from the centroid.
Counts counts_at(double mu, std::int64_t n) {
    const double p1 = p1_from_phi(phi_from_mu0y(mu, static_cast<double>(n)));
    const auto n1 = static_cast<std::int64_t>(std::llround(p1 * static_cast<double>(n)));
    const auto n2 = (n - n1) / 2;
    return {n1, n2, n - n1 - n2};
}

}  // namespace

TEST(Estimators, PlugInExamples) {
    EXPECT_EQ(plugin_bias(kT1, Counts(30, 35, 35)).value, 1.0);
    EXPECT_EQ(plugin_bias(ModelSpec::polytomy(), Counts(3, 50, 9)).value, 0.0);
    EXPECT_EQ(plugin_bias(ModelSpec::unconstrained(), Counts(3, 50, 9)).value, 4.0);
    const Observation obs = observe_counts(kT1, Counts(600, 200, 200));
    EXPECT_NEAR(plugin_bias(kT1, obs).value, 1.0 + aicg::erf(obs.mle.norm() / std::sqrt(2.0)), 1e-15);
}

TEST(Estimators, PlugInAtMuTwo) {
    // An exact observation at mu = 2 through the Gaussian-plane path.
    const Cone cone = cone_of(kT1, GeometryParams::from_mu0y(2.0, 1e4));
    const Observation obs = observe_gaussian(cone, {0.3, 2.0}, 1e4);
    EXPECT_NEAR(plugin_bias(kT1, obs).value, 1.9544997361036415856, 1e-15);
}

TEST(Estimators, ObservationOnAFaceIsAtInfinity) {
    const Observation obs = observe_counts(kT3, Counts(0, 40, 0));
    EXPECT_TRUE(obs.at_infinity);
    EXPECT_EQ(plugin_bias(kT3, obs).value, 2.0);
    EstimatorRule uo;
    uo.method = Method::UniformlyOutperforming;
    EXPECT_EQ(estimate_bias(kT3, uo, obs).value, 2.0);
}

TEST(Estimators, TransformedSampleMeanNormIsLabelSymmetric) {
    const double a = observe_counts(kT3, Counts(70, 20, 10)).zbar.norm();
    EXPECT_EQ(observe_counts(kT3, Counts(10, 70, 20)).zbar.norm(), a);
    EXPECT_EQ(observe_counts(kT3, Counts(20, 10, 70)).zbar.norm(), a);
}

TEST(Estimators, LeastFavorable) {
    EXPECT_NEAR(least_favorable(kT1, Side::Lower).value, 1.0, 1e-6);
    EXPECT_NEAR(least_favorable(kT1, Side::Upper).value, 2.0, 1e-6);
    EXPECT_NEAR(least_favorable(kT3, Side::Lower).value, 2.0, 1e-6);
    EXPECT_NEAR(least_favorable(kT3, Side::Upper).value, 2.8269933, 1e-6);
    EXPECT_EQ(least_favorable(ModelSpec::polytomy(), Side::Lower).value, 0.0);
    EXPECT_EQ(least_favorable(ModelSpec::polytomy(), Side::Upper).value, 0.0);
    EXPECT_EQ(least_favorable(kT1, Side::Upper).method, Method::UpperLeastFavorable);
}

TEST(Estimators, NeighborhoodRuleExamples) {
    EXPECT_EQ(neighborhood_rule(kT1, 0.0, {0.0, 0.0}).value, 1.0);
    EXPECT_EQ(neighborhood_rule(kT1, 0.0, {0.0, 0.01}).value, 2.0);
    EXPECT_NEAR(neighborhood_rule(kT3, 1.77, {0.0, 1.5}).value, 2.8269933, 1e-7);
    EXPECT_EQ(neighborhood_rule(kT3, 1.77, {0.0, 1.8}).value, 2.0);
    EXPECT_EQ(neighborhood_rule(kT3, 0.0, {0.2, 0.1}).value, 2.0);
    EXPECT_THROW(neighborhood_rule(kT3, -1.0, {0.0, 0.0}), std::invalid_argument);
}

TEST(Estimators, RadialProbabilityMatchesNoncentralChiSquare) {
    // scipy.stats.ncx2.cdf(r^2, 2, mu^2) / chi2.cdf
    EXPECT_NEAR(radial_probability(1.77, 0.0), 0.79121494474824447718, 1e-14);
    EXPECT_NEAR(radial_probability(1.77, 1.0), 0.63740507303120025371, 1e-12);
    EXPECT_NEAR(radial_probability(2.21, 3.0), 0.16134241377957556567, 1e-12);
    EXPECT_NEAR(radial_probability(0.5, 4.0), 0.000062176091333292318985, 1e-14);
    EXPECT_NEAR(radial_probability(3.0, 2.5), 0.62301014339665842285, 1e-12);
    EXPECT_EQ(radial_probability(0.0, 1.0), 0.0);
}

TEST(Estimators, ExpectedNeighborhoodValueForT1) {
    for (double mu : {0.0, 0.5, 2.0}) {
        EXPECT_NEAR(expected_neighborhood_value(kT1, 0.0, mu, 1e6), 2.0 - normal_cdf(-mu), 1e-15);
        EXPECT_NEAR(expected_neighborhood_value(kT1, 0.95, mu, 1e6), 2.0 - normal_cdf(0.95 - mu), 1e-15);
    }
}

TEST(Estimators, T3RadialQuadratureAgreesWithSimulation) {
    // Monte Carlo fallback path versus the Rice-density quadrature.
    const double r = 1.77;
    const double mu = 1.2;
    const double quad = radial_probability(r, mu);
    McSettings s;
    s.seed = 21;
    s.samples = 400000;
    const auto acc = run_chunks(s, [&](Rng& rng) {
        const double x = rng.normal();
        const double y = mu + rng.normal();
        return std::hypot(x, y) <= r ? 1.0 : 0.0;
    });
    EXPECT_NEAR(acc.mean(), quad, 3.0 * acc.std_error());
}

TEST(Estimators, MinimaxRadii) {
    std::vector<double> grid;
    for (int k = 0; k <= 250; ++k) grid.push_back(0.02 * k);
    const RadiusSearch t1 = minimax_radius(kT1, grid, 1e6);
    EXPECT_NEAR(t1.radius, 0.95, 0.05);
    EXPECT_FALSE(t1.warning);
    const RadiusSearch t3 = minimax_radius(kT3, grid, 1e6);
    EXPECT_NEAR(t3.radius, 2.21, 0.1);
    EXPECT_FALSE(minimax_radius(ModelSpec::polytomy(), grid, 1e6).applicable);
}

TEST(Estimators, MinimaxRadiusIsStableUnderGridHalving) {
    std::vector<double> coarse, fine;
    for (int k = 0; k <= 100; ++k) coarse.push_back(0.05 * k);
    for (int k = 0; k <= 200; ++k) fine.push_back(0.025 * k);
    EXPECT_NEAR(minimax_radius(kT1, coarse, 1e6).radius, minimax_radius(kT1, fine, 1e6).radius, 0.02);
    EXPECT_NEAR(minimax_radius(kT3, coarse, 1e6).radius, minimax_radius(kT3, fine, 1e6).radius, 0.02);
}

TEST(Estimators, MinimaxDegenerateGridHitsTheCap) {
    const RadiusSearch r = minimax_radius(kT1, {0.0}, 1e6);
    EXPECT_EQ(r.radius, 6.0);
}

TEST(Estimators, UniformlyOutperformingRadii) {
    std::vector<double> grid;
    for (int k = 0; k <= 250; ++k) grid.push_back(0.02 * k);
    const RadiusSearch t3 = uo_radius(kT3, grid, 1e6, 1.02e-14);
    EXPECT_NEAR(t3.radius, 1.77, 0.1);
    EXPECT_LE(t3.objective, 0.0);
    // The r = 0 rule for T1 is feasible: 2 Phi(mu) <= 2 - Phi(-mu) <= 2.
    const RadiusSearch t1 = uo_radius(kT1, grid, 1e6, 1.02e-14);
    EXPECT_GE(t1.radius, 0.0);
    EXPECT_LT(t1.radius, 0.2);
    // A vacuous tolerance only leaves the AIC-side bound.
    const RadiusSearch loose = uo_radius(kT3, grid, 1e6, INFINITY);
    EXPECT_GE(loose.radius, t3.radius);
}

TEST(Estimators, ConsistentEstimate) {
    const Cone cone = cone_of(kT1, GeometryParams::from_phi0(1.0, 1e4));
    const ConsistentResult origin = consistent_estimate(kT1, cone, {0.0, 0.0}, 1e4);
    EXPECT_TRUE(origin.at_singularity);
    EXPECT_EQ(origin.bias.value, 1.0);
    const ConsistentResult far = consistent_estimate(kT1, cone, {0.0, 10.0}, 1e4);
    EXPECT_FALSE(far.at_singularity);
    EXPECT_NEAR(far.bias.value, bias_t1(10.0).value, 1e-15);
    EXPECT_THROW(consistent_estimate(kT1, cone, {0.0, 0.0}, 2.0), DomainError);
    EtaRate bad;
    bad.exponent = 0.5;
    EXPECT_THROW(consistent_estimate(kT1, cone, {0.0, 0.0}, 1e4, bad), std::invalid_argument);
    EXPECT_NEAR(EtaRate{}.radius(1e6), 10.0, 1e-9);
}

TEST(Estimators, BootstrapAtTheBoundary) {
    const Counts c(3334, 3333, 3333);
    const BiasEstimate b = bootstrap_bias(kT1, c, 100000, 5);
    ASSERT_TRUE(b.std_error);
    const double mu = observe_counts(kT1, c).mle.norm();
    EXPECT_LT(mu, 0.05);
    EXPECT_NEAR(b.value, bias_t1(mu).value, 3.0 * *b.std_error);
}

TEST(Estimators, BootstrapFarFromTheBoundary) {
    // n = 1e3 keeps mu = 4 outside the snapping radius n^(1/6) = 3.16.
    const Counts c = counts_at(4.0, 1000);
    const Observation obs = observe_counts(kT1, c);
    ASSERT_GT(obs.mle.norm(), 3.17);
    const BiasEstimate b = bootstrap_bias(kT1, obs, 100000, 6);
    EXPECT_NEAR(b.value, bias_t1(obs.mle.norm()).value, 3.0 * *b.std_error);
}

TEST(Estimators, BootstrapForPolytomyIsZero) {
    const BiasEstimate b = bootstrap_bias(ModelSpec::polytomy(), Counts(5, 9, 11), 1000, 1);
    EXPECT_EQ(b.value, 0.0);
    EXPECT_EQ(*b.std_error, 0.0);
}

TEST(Estimators, BootstrapStandardErrorScaling) {
    const Counts c(3334, 3333, 3333);
    const double small = *bootstrap_bias(kT3, c, 20000, 9).std_error;
    const double large = *bootstrap_bias(kT3, c, 80000, 9).std_error;
    EXPECT_NEAR(large / small, 0.5, 0.1);
}

TEST(Estimators, CrudeBounds) {
    EXPECT_EQ(crude_bounds(kT1).lower, 0.0);
    EXPECT_EQ(crude_bounds(kT1).upper, 2.0);
    EXPECT_EQ(crude_bounds(kT3).upper, 4.0);
    EXPECT_EQ(crude_bounds(ModelSpec::unconstrained()).lower, 4.0);
    EXPECT_EQ(crude_bounds(ModelSpec::unconstrained()).upper, 4.0);
    const ModelSpec line = ModelSpec::halflines({std::numbers::pi, 2.0 * std::numbers::pi});
    EXPECT_EQ(crude_bounds(line).lower, 2.0);
    EXPECT_EQ(crude_bounds(line).upper, 2.0);
    const ModelSpec three = ModelSpec::halflines({2.1, 4.2, 2.0 * std::numbers::pi});
    EXPECT_EQ(crude_bounds(three).lower, 0.0);
}

TEST(Estimators, EveryRuleStaysWithinTheLeastFavorableBand) {
    const std::vector<Method> methods{Method::PlugIn, Method::LowerLeastFavorable, Method::UpperLeastFavorable,
                                      Method::UniformlyOutperforming, Method::Minimax, Method::Consistent,
                                      Method::Aic};
    for (const ModelSpec& m : {kT1, kT3}) {
        // The band depends on n through the cone angle, so compare at the sample size of the counts.
        const double lo = least_favorable(m, Side::Lower, 100.0).value;
        const double hi = least_favorable(m, Side::Upper, 100.0).value;
        for (const Counts& c : {Counts(34, 33, 33), Counts(50, 25, 25), Counts(90, 5, 5), Counts(40, 31, 29)}) {
            const Observation obs = observe_counts(m, c);
            for (Method method : methods) {
                EstimatorRule rule;
                rule.method = method;
                rule.reference_n = 100.0;
                const double v = estimate_bias(m, rule, obs).value;
                EXPECT_GE(v, lo - 1e-9) << m.id() << " " << to_string(method);
                EXPECT_LE(v, hi + 1e-9) << m.id() << " " << to_string(method);
            }
        }
    }
}

TEST(Estimators, DataEstimatorRejectsGeneratingMethods) {
    EstimatorRule rule;
    rule.method = Method::Quadrature;
    EXPECT_THROW(estimate_bias(kT3, rule, observe_counts(kT3, Counts(5, 5, 5))), std::invalid_argument);
}

TEST(Estimators, ConsistencyFrequencies) {
    McSettings s;
    s.seed = 31;
    s.samples = 2000;
    const SnapFrequency at_boundary =
        consistency_frequency(kT1, SimplexPoint::centroid(), 1000000, EtaRate{}, s);
    EXPECT_GE(at_boundary.frequency, 0.999);
    const SnapFrequency away = consistency_frequency(kT1, point_on_topology(1, 0.9), 1000000, EtaRate{}, s);
    EXPECT_LE(away.frequency, 0.001);
}
