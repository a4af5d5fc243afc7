#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aicg/bias.hpp"
#include "aicg/random.hpp"

namespace aicg {

/// No radius satisfies the search constraints.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Which transformed point a neighborhood rule inspects.
enum class ObservedPoint {
    ModelDefault,  ///< MLE for T1, sample mean otherwise
    SampleMean,
    Mle,
};

std::string to_string(ObservedPoint p);
ObservedPoint parse_observed_point(const std::string& s);

/// Radius of the consistent-estimation neighborhood is sqrt(n) * eta_n with
/// eta_n = n^(-exponent). The exponent must lie strictly inside (0, 1/2).
struct EtaRate {
    double exponent = 1.0 / 3.0;

    void validate() const;
    double radius(double n) const;
};

struct EstimatorRule {
    Method method = Method::PlugIn;
    std::optional<double> radius;  ///< uo / minimax; per-model default when unset
    ObservedPoint observed = ObservedPoint::ModelDefault;
    EtaRate eta;
    std::int64_t bootstrap_replicates = 1000;
    double reference_n = 1e6;  ///< sample size the least-favorable values are computed at

    void validate() const;
};

/// Everything an estimator may look at for one sample, in transformed coordinates.
struct Observation {
    TransformedPoint zbar;  ///< sample mean
    TransformedPoint mle;   ///< model estimate, on the cone
    GeometryParams geometry;
    Cone cone;
    double n = 1.0;
    bool at_infinity = false;  ///< estimate on a simplex face: infinitely far from the singularity
};

/// Transforms counts using the Fisher information at the model MLE.
Observation observe_counts(const ModelSpec& model, const Counts& counts);

/// Gaussian-plane observation: mle is the projection of z onto `cone`.
Observation observe_gaussian(const Cone& cone, const TransformedPoint& z, double n);

ObservedPoint resolve_observed(const ModelSpec& model, ObservedPoint p);
TransformedPoint observed_point(const ModelSpec& model, const Observation& obs, ObservedPoint p);

enum class Evaluation { Direct, Tabulated };

/// The model's AICg correction for a generating point at Mahalanobis distance
/// `mu` from the singularity, with sample size n fixing the cone angles.
double bias_at(const ModelSpec& model, double mu, double n, Evaluation how = Evaluation::Direct);

/// Correction at the singular or boundary point itself.
double singular_value(const ModelSpec& model);

/// Regular models return their constant for every rule.
bool has_constant_bias(const ModelSpec& model);

BiasEstimate plugin_bias(const ModelSpec& model, const Counts& counts);
BiasEstimate plugin_bias(const ModelSpec& model, const Observation& obs, Evaluation how = Evaluation::Direct);

enum class Side { Lower, Upper };

/// Infimum or supremum of the correction over the cone, mu in [0, 50].
BiasEstimate least_favorable(const ModelSpec& model, Side side, double reference_n = 1e6);

/// Default neighborhood radius for uo / minimax rules.
double default_radius(const ModelSpec& model, Method method);

/// Singularity value if the observed point lies within r of the singularity, else AIC.
BiasEstimate neighborhood_rule(const ModelSpec& model, double r, const TransformedPoint& observed,
                               Method tag = Method::UniformlyOutperforming);

/// P(||z|| <= r) for z ~ N((0, mu), I_2), by quadrature of the Rice density.
double radial_probability(double r, double mu);

/// E{c(r)} at generating distance mu for the neighborhood rule of `model`.
double expected_neighborhood_value(const ModelSpec& model, double r, double mu, double n,
                                   ObservedPoint observed = ObservedPoint::ModelDefault);

struct RadiusSearch {
    double radius = 0.0;
    bool applicable = true;
    bool warning = false;
    std::string note;
    double objective = 0.0;  ///< sup risk (minimax) or worst violation (uo) at `radius`
    int evaluations = 0;
};

/// Radius minimizing the sup over the grid of (E{c(r)} - true)^2, r in [0, 6].
RadiusSearch minimax_radius(const ModelSpec& model, const std::vector<double>& mu_grid, double n,
                            ObservedPoint observed = ObservedPoint::ModelDefault);

/// Largest radius keeping E{c(r)} between the true correction and AIC on the
/// grid, up to `violation_tol` past the true value. Throws if r = 0 fails.
RadiusSearch uo_radius(const ModelSpec& model, const std::vector<double>& mu_grid, double n,
                       double violation_tol, ObservedPoint observed = ObservedPoint::ModelDefault);

struct ConsistentResult {
    TransformedPoint estimate;
    bool at_singularity = false;
    BiasEstimate bias;
};

/// Snaps to the singularity when the observed point lies within sqrt(n) eta_n of
/// it; otherwise projects the observed point onto the cone.
ConsistentResult consistent_estimate(const ModelSpec& model, const Cone& cone, const TransformedPoint& observed,
                                     double n, const EtaRate& eta = {}, Evaluation how = Evaluation::Direct);

/// Parametric bootstrap of the correction around the consistent estimate.
BiasEstimate bootstrap_bias(const ModelSpec& model, const Observation& obs, std::int64_t replicates,
                            std::uint64_t seed, const EtaRate& eta = {},
                            ObservedPoint observed = ObservedPoint::ModelDefault, int workers = 1);
BiasEstimate bootstrap_bias(const ModelSpec& model, const Counts& counts, std::int64_t replicates,
                            std::uint64_t seed, const EtaRate& eta = {},
                            ObservedPoint observed = ObservedPoint::ModelDefault, int workers = 1);

struct CrudeBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Twice the dimensions of the largest affine subspace inside, and the smallest
/// affine superspace containing, the cone at the singularity.
CrudeBounds crude_bounds(const ModelSpec& model);

/// Applies `rule` to one observation. Stochastic rules draw from `seed`.
BiasEstimate estimate_bias(const ModelSpec& model, const EstimatorRule& rule, const Observation& obs,
                           std::uint64_t seed = 0, Evaluation how = Evaluation::Direct);

/// Frequency with which the consistent estimate snaps to the singularity over
/// simulated trinomial samples from theta0.
struct SnapFrequency {
    double frequency = 0.0;
    std::int64_t replicates = 0;
};
SnapFrequency consistency_frequency(const ModelSpec& model, const SimplexPoint& theta0, std::int64_t n,
                                    const EtaRate& eta, const McSettings& settings,
                                    ObservedPoint observed = ObservedPoint::ModelDefault);

}  // namespace aicg
