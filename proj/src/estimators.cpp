#include "aicg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "aicg/bias_t3.hpp"
#include "aicg/quadrature.hpp"
#include "aicg/special.hpp"

namespace aicg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRadiusCap = 6.0;
constexpr double kFarMu = 50.0;

bool finite_point(const TransformedPoint& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double aic_value(const ModelSpec& model) { return 2.0 * model.dimension(); }

// Rescales to a permutation-invariant norm so neighborhood decisions respect label symmetry.
TransformedPoint exact_norm(const TransformedPoint& p, double norm) {
    const double current = p.norm();
    if (current == 0.0 || norm == 0.0) return {0.0, 0.0};
    return p * (norm / current);
}

BiasEstimate tagged(double value, Method method) { return {value, method, std::nullopt, {}}; }

}  // namespace

std::string to_string(ObservedPoint p) {
    switch (p) {
        case ObservedPoint::ModelDefault: return "default";
        case ObservedPoint::SampleMean: return "zbar";
        case ObservedPoint::Mle: return "mle";
    }
    return "default";
}

ObservedPoint parse_observed_point(const std::string& s) {
    if (s == "default") return ObservedPoint::ModelDefault;
    if (s == "zbar" || s == "sample-mean") return ObservedPoint::SampleMean;
    if (s == "mle") return ObservedPoint::Mle;
    throw std::invalid_argument("unknown observed point '" + s + "'");
}

void EtaRate::validate() const {
    if (!(exponent > 0.0 && exponent < 0.5)) {
        throw std::invalid_argument("eta exponent must lie in (0, 1/2) so that sqrt(loglog n / n) << eta_n << 1");
    }
}

double EtaRate::radius(double n) const {
    validate();
    if (!(n >= 3.0)) throw DomainError("consistent estimation needs n >= 3");
    return std::sqrt(n) * std::pow(n, -exponent);
}

void EstimatorRule::validate() const {
    if (radius && !(*radius >= 0.0)) throw std::invalid_argument("neighborhood radius must be >= 0");
    if (bootstrap_replicates < 1) throw std::invalid_argument("bootstrap replicates must be >= 1");
    if (!(reference_n >= 1.0)) throw std::invalid_argument("reference n must be >= 1");
    if (method == Method::Consistent || method == Method::Bootstrap) eta.validate();
}

Observation observe_counts(const ModelSpec& model, const Counts& counts) {
    const double n = static_cast<double>(counts.total());
    const MLEResult fit = mle_simplex(model, counts);
    const SimplexPoint mean = counts.proportions();
    Observation obs;
    obs.n = n;
    switch (model.kind()) {
        case ModelKind::T1:
        case ModelKind::T3: {
            const int top = model.kind() == ModelKind::T1 ? model.topology() : argmax_topology(fit.estimate);
            if (!fit.estimate.is_interior()) {
                const double alpha = std::atan(1.0 / 3.0);
                obs.geometry = {0.0, kInf, alpha, 0.5 * (std::numbers::pi / 2.0 - alpha), n};
                obs.zbar = {0.0, kInf};
                obs.mle = {0.0, kInf};
                obs.at_infinity = true;
                break;
            }
            obs.geometry = GeometryParams::from_phi0(phi_from_p1(fit.estimate[top - 1]), n);
            const SimplexTransform map = transform_map(fit.estimate, n, top);
            obs.zbar = exact_norm(map(mean), mahalanobis_at(mean, SimplexPoint::centroid(), fit.estimate, n));
            obs.mle = {0.0, obs.geometry.mu0y};
            break;
        }
        case ModelKind::Polytomy:
        case ModelKind::Unconstrained: {
            obs.geometry = GeometryParams::from_phi0(1.0, n);
            const SimplexTransform map = transform_map(SimplexPoint::centroid(), n, 1);
            obs.zbar = exact_norm(map(mean), mahalanobis(mean, SimplexPoint::centroid(), n));
            obs.mle = model.kind() == ModelKind::Polytomy ? TransformedPoint{} : obs.zbar;
            break;
        }
        case ModelKind::HalfLines:
            throw std::invalid_argument("half-lines models have no simplex data path");
    }
    obs.cone = cone_of(model, obs.geometry);
    return obs;
}

Observation observe_gaussian(const Cone& cone, const TransformedPoint& z, double n) {
    Observation obs;
    obs.n = n;
    obs.zbar = z;
    obs.mle = project_transformed(cone, z);
    obs.geometry = GeometryParams::from_mu0y(obs.mle.norm(), n);
    obs.cone = cone;
    return obs;
}

ObservedPoint resolve_observed(const ModelSpec& model, ObservedPoint p) {
    if (p != ObservedPoint::ModelDefault) return p;
    return model.kind() == ModelKind::T1 ? ObservedPoint::Mle : ObservedPoint::SampleMean;
}

TransformedPoint observed_point(const ModelSpec& model, const Observation& obs, ObservedPoint p) {
    return resolve_observed(model, p) == ObservedPoint::Mle ? obs.mle : obs.zbar;
}

bool has_constant_bias(const ModelSpec& model) {
    return model.kind() == ModelKind::Polytomy || model.kind() == ModelKind::Unconstrained;
}

double bias_at(const ModelSpec& model, double mu, double n, Evaluation how) {
    if (!(mu >= 0.0)) throw DomainError("distance must be nonnegative");
    switch (model.kind()) {
        case ModelKind::Polytomy:
        case ModelKind::Unconstrained:
            return bias_constant(model).value;
        case ModelKind::T1:
            return std::isinf(mu) ? 2.0 : bias_t1(mu).value;
        case ModelKind::T3: {
            if (std::isinf(mu)) return 2.0;
            if (how == Evaluation::Tabulated) return T3BiasTable::for_sample_size(n)(mu);
            const GeometryParams g = GeometryParams::from_mu0y(mu, n);
            return bias_t3(g.mu0y, g.alpha0).value;
        }
        case ModelKind::HalfLines:
            if (mu == 0.0) return bias_halflines_at_singularity(model).value;
            if (std::isinf(mu)) return 2.0;
            throw std::invalid_argument(
                "half-lines correction away from the apex has no closed form; use the Monte Carlo engine");
    }
    return 0.0;
}

double singular_value(const ModelSpec& model) {
    switch (model.kind()) {
        case ModelKind::T1: return 1.0;
        case ModelKind::T3: return t3_singular_value();
        case ModelKind::HalfLines: return bias_halflines_at_singularity(model).value;
        default: return bias_constant(model).value;
    }
}

BiasEstimate plugin_bias(const ModelSpec& model, const Observation& obs, Evaluation how) {
    const double mu = obs.at_infinity ? kInf : obs.mle.norm();
    BiasEstimate out = tagged(bias_at(model, mu, obs.n, how), Method::PlugIn);
    out.settings["mu_hat"] = std::to_string(mu);
    return out;
}

BiasEstimate plugin_bias(const ModelSpec& model, const Counts& counts) {
    return plugin_bias(model, observe_counts(model, counts));
}

namespace {

struct Envelope {
    double lower;
    double upper;
};

Envelope scan_envelope(const ModelSpec& model, double n) {
    const auto f = [&](double mu) { return bias_at(model, mu, n); };
    // Quadratic spacing: at small n the T3 extremum sits just off the apex.
    constexpr int steps = 200;
    std::vector<double> mus, vals;
    for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        mus.push_back(kFarMu * t * t);
        vals.push_back(f(mus.back()));
    }
    // Golden-section refinement of an interior extremum; endpoints are exact.
    const auto refine = [&](std::size_t k, bool maximize) {
        if (k == 0 || k + 1 == vals.size()) return vals[k];
        double a = mus[k - 1], b = mus[k + 1];
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        const auto obj = [&](double x) { return maximize ? -f(x) : f(x); };
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = obj(c), fd = obj(d);
        while (b - a > 1e-6) {
            if (fc < fd) {
                b = d; d = c; fd = fc; c = b - g * (b - a); fc = obj(c);
            } else {
                a = c; c = d; fc = fd; d = a + g * (b - a); fd = obj(d);
            }
        }
        const double best = maximize ? -std::min(fc, fd) : std::min(fc, fd);
        return maximize ? std::max(best, vals[k]) : std::min(best, vals[k]);
    };
    const auto lo = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    const auto hi = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    return {refine(lo, false), refine(hi, true)};
}

}  // namespace

BiasEstimate least_favorable(const ModelSpec& model, Side side, double reference_n) {
    const Method tag = side == Side::Lower ? Method::LowerLeastFavorable : Method::UpperLeastFavorable;
    if (has_constant_bias(model)) return tagged(bias_constant(model).value, tag);
    if (model.kind() == ModelKind::HalfLines) {
        throw std::invalid_argument("least favorable corrections need the bias function off the apex");
    }
    static std::mutex mutex;
    static std::map<std::pair<std::string, double>, Envelope> cache;
    Envelope env{};
    {
        std::lock_guard lock(mutex);
        const auto key = std::make_pair(model.kind() == ModelKind::T1 ? std::string("t1") : model.id(), reference_n);
        const auto it = cache.find(key);
        if (it != cache.end()) {
            env = it->second;
        } else {
            env = scan_envelope(model, reference_n);
            cache.emplace(key, env);
        }
    }
    BiasEstimate out = tagged(side == Side::Lower ? env.lower : env.upper, tag);
    out.settings["reference_n"] = std::to_string(reference_n);
    return out;
}

double default_radius(const ModelSpec& model, Method method) {
    const bool uo = method == Method::UniformlyOutperforming;
    if (method != Method::UniformlyOutperforming && method != Method::Minimax) {
        throw std::invalid_argument("default radius exists only for uo and minimax rules");
    }
    switch (model.kind()) {
        case ModelKind::T1: return uo ? 0.0 : 0.95;
        case ModelKind::T3: return uo ? 1.77 : 2.21;
        case ModelKind::Polytomy:
        case ModelKind::Unconstrained: return 0.0;
        case ModelKind::HalfLines: break;
    }
    throw std::invalid_argument("no default neighborhood radius for half-lines models; pass one");
}

BiasEstimate neighborhood_rule(const ModelSpec& model, double r, const TransformedPoint& observed, Method tag) {
    if (!(r >= 0.0)) throw std::invalid_argument("neighborhood radius must be >= 0");
    if (has_constant_bias(model)) return tagged(bias_constant(model).value, tag);
    const bool inside = finite_point(observed) && observed.norm() <= r;
    BiasEstimate out = tagged(inside ? singular_value(model) : aic_value(model), tag);
    out.settings["radius"] = std::to_string(r);
    out.settings["inside"] = inside ? "true" : "false";
    return out;
}

double radial_probability(double r, double mu) {
    if (!(r > 0.0)) return 0.0;
    if (!(mu >= 0.0)) throw DomainError("mu must be nonnegative");
    if (mu == 0.0) return -std::expm1(-0.5 * r * r);
    const auto density = [mu](double rho) {
        const double d = rho - mu;
        return rho * std::exp(-0.5 * d * d) * bessel_i0_scaled(rho * mu);
    };
    const double p = quad_adaptive_1d(density, 0.0, r, 1e-14, 400).value;
    return std::clamp(p, 0.0, 1.0);
}

namespace {

double mc_projected_probability(const ModelSpec& model, double r, double mu, double n, const McSettings& mc) {
    const Cone cone = cone_of(model, GeometryParams::from_mu0y(mu, n));
    const auto acc = run_chunks(mc, [&](Rng& rng) {
        const double x = rng.normal();
        const double y = mu + rng.normal();
        return project_transformed(cone, {x, y}).norm() <= r ? 1.0 : 0.0;
    });
    return acc.mean();
}

McSettings fallback_mc() {
    McSettings s;
    s.seed = 0x5EEDULL;
    s.samples = 200000;
    s.workers = 1;
    return s;
}

}  // namespace

double expected_neighborhood_value(const ModelSpec& model, double r, double mu, double n, ObservedPoint observed) {
    if (has_constant_bias(model)) return bias_constant(model).value;
    const double cs = singular_value(model);
    const double ca = aic_value(model);
    double p = 0.0;
    if (resolve_observed(model, observed) == ObservedPoint::SampleMean) {
        p = radial_probability(r, mu);
    } else if (model.kind() == ModelKind::T1) {
        // MLE height is max(y, 0), y ~ N(mu, 1).
        p = normal_cdf(r - mu);
    } else {
        p = mc_projected_probability(model, r, mu, n, fallback_mc());
    }
    return cs * p + ca * (1.0 - p);
}

namespace {

void require_searchable(const ModelSpec& model) {
    if (model.kind() == ModelKind::HalfLines) {
        throw std::invalid_argument("radius search needs the bias function off the apex");
    }
}

std::vector<double> truth_on_grid(const ModelSpec& model, const std::vector<double>& grid, double n) {
    std::vector<double> t;
    t.reserve(grid.size());
    for (double mu : grid) t.push_back(bias_at(model, mu, n));
    return t;
}

}  // namespace

RadiusSearch minimax_radius(const ModelSpec& model, const std::vector<double>& mu_grid, double n,
                            ObservedPoint observed) {
    RadiusSearch out;
    if (has_constant_bias(model)) {
        out.applicable = false;
        out.note = "not-applicable: constant correction";
        return out;
    }
    require_searchable(model);
    if (mu_grid.empty()) throw std::invalid_argument("mu grid must not be empty");
    const auto truth = truth_on_grid(model, mu_grid, n);
    const auto risk = [&](double r) {
        ++out.evaluations;
        double worst = 0.0;
        for (std::size_t i = 0; i < mu_grid.size(); ++i) {
            const double d = expected_neighborhood_value(model, r, mu_grid[i], n, observed) - truth[i];
            worst = std::max(worst, d * d);
        }
        return worst;
    };
    constexpr int steps = 120;
    const double h = kRadiusCap / steps;
    std::vector<double> scan(steps + 1);
    for (int k = 0; k <= steps; ++k) scan[static_cast<std::size_t>(k)] = risk(h * k);
    const auto kmin = static_cast<std::size_t>(std::min_element(scan.begin(), scan.end()) - scan.begin());

    bool unimodal = true;
    for (std::size_t j = 0; j + 1 < scan.size(); ++j) {
        const double slack = 1e-15 * std::max(1.0, scan[j]);
        if (j < kmin && scan[j + 1] > scan[j] + slack) unimodal = false;
        if (j >= kmin && scan[j + 1] < scan[j] - slack) unimodal = false;
    }
    if (kmin + 1 == scan.size()) {
        out.radius = kRadiusCap;
        out.objective = scan[kmin];
        out.note = "minimum at the radius cap";
        return out;
    }
    if (!unimodal) {
        out.radius = h * static_cast<double>(kmin);
        out.objective = scan[kmin];
        out.warning = true;
        out.note = "sup-risk curve is not unimodal; returning the grid-scan minimizer";
        return out;
    }
    double a = kmin == 0 ? 0.0 : h * static_cast<double>(kmin - 1);
    double b = h * static_cast<double>(kmin + 1);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = risk(c), fd = risk(d);
    while (b - a > 1e-4) {
        if (fc <= fd) {
            b = d; d = c; fd = fc; c = b - g * (b - a); fc = risk(c);
        } else {
            a = c; c = d; fc = fd; d = a + g * (b - a); fd = risk(d);
        }
    }
    out.radius = 0.5 * (a + b);
    out.objective = risk(out.radius);
    if (scan[kmin] < out.objective) {
        out.radius = h * static_cast<double>(kmin);
        out.objective = scan[kmin];
    }
    return out;
}

RadiusSearch uo_radius(const ModelSpec& model, const std::vector<double>& mu_grid, double n,
                       double violation_tol, ObservedPoint observed) {
    RadiusSearch out;
    if (has_constant_bias(model)) {
        out.applicable = false;
        out.note = "not-applicable: constant correction";
        return out;
    }
    require_searchable(model);
    if (mu_grid.empty()) throw std::invalid_argument("mu grid must not be empty");
    if (!(violation_tol >= 0.0)) throw std::invalid_argument("violation tolerance must be >= 0");
    const auto truth = truth_on_grid(model, mu_grid, n);
    const double aic = aic_value(model);
    // Worst excursion outside [AIC side, true side + tol]; <= 0 means feasible.
    const auto excess = [&](double r) {
        ++out.evaluations;
        double worst = -kInf;
        for (std::size_t i = 0; i < mu_grid.size(); ++i) {
            const double e = expected_neighborhood_value(model, r, mu_grid[i], n, observed);
            const double t = truth[i];
            double v;
            if (aic >= t) {
                v = std::max(e - aic, (t - violation_tol) - e);
            } else {
                v = std::max(aic - e, e - (t + violation_tol));
            }
            worst = std::max(worst, v);
        }
        return worst;
    };
    if (excess(0.0) > 0.0) throw InfeasibleError("no feasible uniformly outperforming radius: r = 0 already violates the constraints");
    constexpr double step = 0.1;
    double lo = 0.0;
    double hi = -1.0;
    for (int k = 1; k * step <= kRadiusCap + 1e-12; ++k) {
        const double r = k * step;
        if (excess(r) > 0.0) {
            hi = r;
            break;
        }
        lo = r;
    }
    if (hi < 0.0) {
        out.radius = kRadiusCap;
        out.objective = excess(kRadiusCap);
        out.note = "feasible up to the radius cap";
        return out;
    }
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? hi : lo) = mid;
    }
    out.radius = lo;
    out.objective = excess(lo);
    return out;
}

ConsistentResult consistent_estimate(const ModelSpec& model, const Cone& cone, const TransformedPoint& observed,
                                     double n, const EtaRate& eta, Evaluation how) {
    const double radius = eta.radius(n);
    ConsistentResult out;
    out.bias.method = Method::Consistent;
    out.bias.settings["radius"] = std::to_string(radius);
    if (has_constant_bias(model)) {
        out.estimate = model.kind() == ModelKind::Polytomy ? TransformedPoint{} : observed;
        out.at_singularity = model.kind() == ModelKind::Polytomy;
        out.bias.value = bias_constant(model).value;
        return out;
    }
    if (!finite_point(observed)) {
        out.estimate = observed;
        out.bias.value = bias_at(model, kInf, n, how);
        return out;
    }
    if (observed.norm() <= radius) {
        out.estimate = {};
        out.at_singularity = true;
        out.bias.value = singular_value(model);
        return out;
    }
    out.estimate = project_transformed(cone, observed);
    out.bias.value = bias_at(model, out.estimate.norm(), n, how);
    return out;
}

BiasEstimate bootstrap_bias(const ModelSpec& model, const Observation& obs, std::int64_t replicates,
                            std::uint64_t seed, const EtaRate& eta, ObservedPoint observed, int workers) {
    if (replicates < 1) throw std::invalid_argument("bootstrap replicates must be >= 1");
    BiasEstimate out = tagged(0.0, Method::Bootstrap);
    out.settings["replicates"] = std::to_string(replicates);
    out.settings["seed"] = std::to_string(seed);
    const TransformedPoint point = observed_point(model, obs, observed);
    if (obs.at_infinity || !finite_point(point)) {
        out.value = bias_at(model, kInf, obs.n);
        out.std_error = 0.0;
        return out;
    }
    const ConsistentResult centre = consistent_estimate(model, obs.cone, point, obs.n, eta);
    TransformedPoint mu = centre.estimate;
    Cone cone = obs.cone;
    if (model.kind() == ModelKind::T1 || model.kind() == ModelKind::T3) {
        // Put the centre on the distinguished ray of the cone for its own generating point.
        mu = {0.0, centre.estimate.norm()};
        cone = cone_of(model, GeometryParams::from_mu0y(mu.y, obs.n));
    }
    McSettings mc;
    mc.seed = seed;
    mc.samples = replicates;
    mc.workers = workers;
    const auto acc = run_chunks(mc, [&](Rng& rng) {
        const TransformedPoint z{mu.x + rng.normal(), mu.y + rng.normal()};
        const TransformedPoint m = project_transformed(cone, z);
        return 2.0 * (z - mu).dot(m - mu);
    });
    out.value = acc.mean();
    out.std_error = acc.std_error();
    out.settings["centre_at_singularity"] = centre.at_singularity ? "true" : "false";
    return out;
}

BiasEstimate bootstrap_bias(const ModelSpec& model, const Counts& counts, std::int64_t replicates,
                            std::uint64_t seed, const EtaRate& eta, ObservedPoint observed, int workers) {
    return bootstrap_bias(model, observe_counts(model, counts), replicates, seed, eta, observed, workers);
}

CrudeBounds crude_bounds(const ModelSpec& model) {
    switch (model.kind()) {
        case ModelKind::Polytomy: return {0.0, 0.0};
        case ModelKind::Unconstrained: return {4.0, 4.0};
        case ModelKind::T1: return {0.0, 2.0};
        case ModelKind::T3: return {0.0, 4.0};
        case ModelKind::HalfLines: break;
    }
    const auto& a = model.angles();
    const auto opposite = [](double x, double y) {
        return std::abs(std::abs(x - y) - std::numbers::pi) < 1e-12;
    };
    bool contains_line = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) contains_line = contains_line || opposite(a[i], a[j]);
    }
    const bool collinear = a.size() == 1 || (a.size() == 2 && contains_line);
    return {contains_line ? 2.0 : 0.0, collinear ? 2.0 : 4.0};
}

BiasEstimate estimate_bias(const ModelSpec& model, const EstimatorRule& rule, const Observation& obs,
                           std::uint64_t seed, Evaluation how) {
    rule.validate();
    switch (rule.method) {
        case Method::Aic:
            return bias_aic(model);
        case Method::PlugIn:
            return plugin_bias(model, obs, how);
        case Method::LowerLeastFavorable:
            return least_favorable(model, Side::Lower, rule.reference_n);
        case Method::UpperLeastFavorable:
            return least_favorable(model, Side::Upper, rule.reference_n);
        case Method::UniformlyOutperforming:
        case Method::Minimax: {
            if (has_constant_bias(model)) return tagged(bias_constant(model).value, rule.method);
            const double r = rule.radius.value_or(default_radius(model, rule.method));
            return neighborhood_rule(model, r, observed_point(model, obs, rule.observed), rule.method);
        }
        case Method::Consistent:
            return consistent_estimate(model, obs.cone, observed_point(model, obs, rule.observed), obs.n, rule.eta, how)
                .bias;
        case Method::Bootstrap:
            return bootstrap_bias(model, obs, rule.bootstrap_replicates, seed, rule.eta, rule.observed);
        case Method::CrudeLower:
            return tagged(crude_bounds(model).lower, Method::CrudeLower);
        case Method::CrudeUpper:
            return tagged(crude_bounds(model).upper, Method::CrudeUpper);
        case Method::ClosedForm:
        case Method::Quadrature:
        case Method::MonteCarlo:
            break;
    }
    throw std::invalid_argument("method '" + to_string(rule.method) +
                                "' needs the generating parameter and is not a data estimator");
}

SnapFrequency consistency_frequency(const ModelSpec& model, const SimplexPoint& theta0, std::int64_t n,
                                    const EtaRate& eta, const McSettings& settings, ObservedPoint observed) {
    const double radius = eta.radius(static_cast<double>(n));
    const auto acc = run_chunks(settings, [&](Rng& rng) {
        const Counts c = rng.trinomial(n, theta0);
        const Observation obs = observe_counts(model, c);
        const TransformedPoint p = observed_point(model, obs, observed);
        return finite_point(p) && p.norm() <= radius ? 1.0 : 0.0;
    });
    return {acc.mean(), acc.count()};
}

}  // namespace aicg
