#include "aicg/bias.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aicg/special.hpp"

namespace aicg {

std::string to_string(Method m) {
    switch (m) {
        case Method::ClosedForm: return "closed-form";
        case Method::Quadrature: return "quadrature";
        case Method::MonteCarlo: return "monte-carlo";
        case Method::PlugIn: return "plug-in";
        case Method::LowerLeastFavorable: return "llf";
        case Method::UpperLeastFavorable: return "ulf";
        case Method::UniformlyOutperforming: return "uo";
        case Method::Minimax: return "minimax";
        case Method::Consistent: return "consistent";
        case Method::Bootstrap: return "bootstrap";
        case Method::Aic: return "aic";
        case Method::CrudeLower: return "crude-lower";
        case Method::CrudeUpper: return "crude-upper";
    }
    return "unknown";
}

Method parse_method(const std::string& tag) {
    static const std::map<std::string, Method> table = {
        {"closed-form", Method::ClosedForm},
        {"quadrature", Method::Quadrature},
        {"monte-carlo", Method::MonteCarlo},
        {"mc", Method::MonteCarlo},
        {"plug-in", Method::PlugIn},
        {"plugin", Method::PlugIn},
        {"llf", Method::LowerLeastFavorable},
        {"ulf", Method::UpperLeastFavorable},
        {"uo", Method::UniformlyOutperforming},
        {"minimax", Method::Minimax},
        {"consistent", Method::Consistent},
        {"bootstrap", Method::Bootstrap},
        {"aic", Method::Aic},
        {"crude-lower", Method::CrudeLower},
        {"crude-bound", Method::CrudeLower},
        {"crude-upper", Method::CrudeUpper},
    };
    const auto it = table.find(tag);
    if (it == table.end()) throw std::invalid_argument("unknown method '" + tag + "'");
    return it->second;
}

BiasEstimate bias_t1(double mu0y) {
    if (!(mu0y >= 0.0)) throw DomainError("mu0y must be nonnegative");
    return {1.0 + erf(mu0y / std::numbers::sqrt2), Method::ClosedForm, std::nullopt, {}};
}

double halflines_small_first_sector(const std::vector<double>& sectors) {
    double s = 0.0;
    for (double phi : sectors) s += std::sin(phi);
    return 2.0 + s / std::numbers::pi;
}

double halflines_large_first_sector(const std::vector<double>& sectors) {
    double s = 0.0;
    for (std::size_t i = 1; i < sectors.size(); ++i) s += std::sin(sectors[i]);
    return 3.0 + (s - sectors.front()) / std::numbers::pi;
}

BiasEstimate bias_halflines_at_singularity(const ModelSpec& model) {
    if (model.kind() != ModelKind::HalfLines) throw std::invalid_argument("expected a half-lines model");
    const auto sectors = model.sectors();
    const double first = sectors.front();
    const double v = first <= std::numbers::pi ? halflines_small_first_sector(sectors)
                                               : halflines_large_first_sector(sectors);
    BiasEstimate out{v, Method::ClosedForm, std::nullopt, {}};
    out.settings["rays"] = std::to_string(sectors.size());
    return out;
}

double halflines_equal_sectors(int l) {
    if (l < 1) throw DomainError("need at least one ray");
    if (l == 1) return 1.0;
    return 2.0 + l / std::numbers::pi * std::sin(2.0 * std::numbers::pi / l);
}

BiasEstimate bias_constant(const ModelSpec& model) {
    switch (model.kind()) {
        case ModelKind::Polytomy: return {0.0, Method::ClosedForm, std::nullopt, {}};
        case ModelKind::Unconstrained: return {4.0, Method::ClosedForm, std::nullopt, {}};
        default: throw std::invalid_argument("bias_constant applies only to polytomy and unconstrained models");
    }
}

BiasEstimate bias_aic(const ModelSpec& model) {
    return {2.0 * model.dimension(), Method::Aic, std::nullopt, {}};
}

double t3_singular_value() { return 2.0 + 3.0 * std::sqrt(3.0) / (2.0 * std::numbers::pi); }

}  // namespace aicg
