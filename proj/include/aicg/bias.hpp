#pragma once

#include <map>
#include <optional>
#include <string>

#include "aicg/models.hpp"

namespace aicg {

enum class Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
    PlugIn,
    LowerLeastFavorable,
    UpperLeastFavorable,
    UniformlyOutperforming,
    Minimax,
    Consistent,
    Bootstrap,
    Aic,
    CrudeLower,
    CrudeUpper,
};

/// Short tag used in CSV/JSON output ("closed-form", "llf", "uo", ...).
std::string to_string(Method m);
/// Inverse of to_string(); also accepts "plugin", "mc", "crude-bound" (lower).
Method parse_method(const std::string& tag);

/// A bias-correction value. `std_error` is set exactly for simulation-based methods.
struct BiasEstimate {
    double value = 0.0;
    Method method = Method::ClosedForm;
    std::optional<double> std_error;
    std::map<std::string, std::string> settings;

    /// Effective number of parameters, half the bias correction.
    double effective_parameters() const { return 0.5 * value; }
};

/// Boundary half-line model: 1 + erf(mu0y / sqrt 2).
BiasEstimate bias_t1(double mu0y);

/// Half-lines model with mu0 at the apex.
BiasEstimate bias_halflines_at_singularity(const ModelSpec& model);

/// The two case expressions of the half-lines formula, exposed for the
/// continuity check at phi1 = pi. `sectors` are phi_1..phi_l.
double halflines_small_first_sector(const std::vector<double>& sectors);
double halflines_large_first_sector(const std::vector<double>& sectors);

/// Equal-sector half-lines value for l rays.
double halflines_equal_sectors(int l);

/// Regular models: Polytomy -> 0, Unconstrained -> 4.
BiasEstimate bias_constant(const ModelSpec& model);

/// Classical AIC correction, 2 * dim.
BiasEstimate bias_aic(const ModelSpec& model);

/// Value of the T3 correction at its singularity, 2 + 3 sqrt(3) / (2 pi).
double t3_singular_value();

}  // namespace aicg
