#pragma once

#include <string>
#include <vector>

#include "aicg/estimators.hpp"

namespace aicg {

/// Mean and spread of the per-draw bias statistic, for property checks.
struct DrawSummary {
    BiasEstimate estimate;
    double min_statistic = 0.0;
    double max_statistic = 0.0;
};

/// 2 E{(z - mu0)^T (mu_hat - mu0)} for z ~ N(mu0, I), mu_hat the projection onto `cone`.
BiasEstimate mc_bias_gaussian(const Cone& cone, const TransformedPoint& mu0, const McSettings& settings);
DrawSummary mc_bias_gaussian_summary(const Cone& cone, const TransformedPoint& mu0, const McSettings& settings);

/// Whether theta0 belongs to the model's parameter space (within 1e-9).
bool in_model(const ModelSpec& model, const SimplexPoint& theta0);

/// Finite-n target correction: mean of 2 sum_i (n_i - n theta0_i) log theta_hat_i.
BiasEstimate mc_target_trinomial(const ModelSpec& model, const SimplexPoint& theta0, std::int64_t n,
                                 const McSettings& settings);

/// Expected value of a data estimator when z ~ N(mu0, I) in the transformed plane.
BiasEstimate mc_expected_estimator(const ModelSpec& model, const EstimatorRule& rule, const Cone& cone,
                                   const TransformedPoint& mu0, double n, const McSettings& settings);

/// start:stop:step over mu0y; step 0 or start == stop gives one point.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    static GridSpec parse(const std::string& text);
    std::vector<double> points() const;
};

struct CurvePoint {
    double mu0y = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double n = 0.0;
};

struct CurveRow {
    double mu0y = 0.0;
    CurvePoint target;
    double aicg_bias = 0.0;
    double aic_bias = 0.0;
    std::vector<CurvePoint> estimators;  ///< one per requested rule
};

/// Per grid point: simulated finite-n target, analytic AICg correction, AIC constant
/// and the expectation of each requested estimator. Row i draws from derive_seed(seed, i).
std::vector<CurveRow> curve_grid(const ModelSpec& model, std::int64_t n, const std::vector<double>& grid,
                                 const std::vector<EstimatorRule>& estimators, const McSettings& settings);

/// Centered moving average with the given odd window, shrinking at the ends.
std::vector<double> moving_average(const std::vector<double>& values, int window);

}  // namespace aicg
