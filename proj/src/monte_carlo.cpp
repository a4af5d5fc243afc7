#include "aicg/monte_carlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "aicg/bias_t3.hpp"

namespace aicg {

namespace {

BiasEstimate from_accumulator(const MeanAccumulator& acc, Method method, const McSettings& s) {
    BiasEstimate out;
    out.value = acc.mean();
    out.std_error = acc.std_error();
    out.method = method;
    out.settings["seed"] = std::to_string(s.seed);
    out.settings["samples"] = std::to_string(s.samples);
    out.settings["chunk_size"] = std::to_string(s.chunk_size);
    return out;
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw std::invalid_argument("not a number: '" + text + "'");
    return v;
}

SimplexPoint generating_point(const ModelSpec& model, double mu, std::int64_t n) {
    switch (model.kind()) {
        case ModelKind::T1: return point_on_topology(model.topology(), phi_from_mu0y(mu, static_cast<double>(n)));
        case ModelKind::T3: return point_on_topology(1, phi_from_mu0y(mu, static_cast<double>(n)));
        case ModelKind::Polytomy:
        case ModelKind::Unconstrained:
            if (mu != 0.0) throw std::invalid_argument("curves for regular models are defined at the centroid only");
            return SimplexPoint::centroid();
        case ModelKind::HalfLines: break;
    }
    throw std::invalid_argument("half-lines models have no finite-n curve");
}

}  // namespace

DrawSummary mc_bias_gaussian_summary(const Cone& cone, const TransformedPoint& mu0, const McSettings& settings) {
    settings.validate();
    if (!on_cone(cone, mu0)) throw DomainError("mu0 must lie on the cone");
    const auto acc = run_chunks(settings, [&](Rng& rng) {
        const TransformedPoint z{mu0.x + rng.normal(), mu0.y + rng.normal()};
        const TransformedPoint m = project_transformed(cone, z);
        return 2.0 * (z - mu0).dot(m - mu0);
    });
    return {from_accumulator(acc, Method::MonteCarlo, settings), acc.min(), acc.max()};
}

BiasEstimate mc_bias_gaussian(const Cone& cone, const TransformedPoint& mu0, const McSettings& settings) {
    return mc_bias_gaussian_summary(cone, mu0, settings).estimate;
}

bool in_model(const ModelSpec& model, const SimplexPoint& theta0) {
    constexpr double tol = 1e-9;
    // Line of topology top + 1: the other two coordinates equal, the large one >= 1/3.
    const auto on_line = [&](int top) {
        const int a = (top + 1) % 3;
        const int b = (top + 2) % 3;
        return std::abs(theta0[a] - theta0[b]) <= tol && theta0[top] >= 1.0 / 3.0 - tol;
    };
    switch (model.kind()) {
        case ModelKind::T1: return on_line(model.topology() - 1);
        case ModelKind::T3: return on_line(0) || on_line(1) || on_line(2);
        case ModelKind::Polytomy:
            return std::abs(theta0[0] - 1.0 / 3.0) <= tol && std::abs(theta0[1] - 1.0 / 3.0) <= tol;
        case ModelKind::Unconstrained: return theta0.is_interior();
        case ModelKind::HalfLines: return false;
    }
    return false;
}

BiasEstimate mc_target_trinomial(const ModelSpec& model, const SimplexPoint& theta0, std::int64_t n,
                                 const McSettings& settings) {
    settings.validate();
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!in_model(model, theta0)) throw DomainError("theta0 lies outside the model's parameter space");
    const double nd = static_cast<double>(n);
    const auto acc = run_chunks(settings, [&](Rng& rng) {
        const Counts c = rng.trinomial(n, theta0);
        const SimplexPoint est = mle_simplex(model, c).estimate;
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            s += (static_cast<double>(c[i]) - nd * theta0[i]) * std::log(std::max(est[i], 1e-12));
        }
        return 2.0 * s;
    });
    BiasEstimate out = from_accumulator(acc, Method::MonteCarlo, settings);
    out.settings["n"] = std::to_string(n);
    return out;
}

BiasEstimate mc_expected_estimator(const ModelSpec& model, const EstimatorRule& rule, const Cone& cone,
                                   const TransformedPoint& mu0, double n, const McSettings& settings) {
    settings.validate();
    rule.validate();
    if (!on_cone(cone, mu0)) throw DomainError("mu0 must lie on the cone");
    EstimatorRule inner = rule;
    if (inner.method == Method::UniformlyOutperforming || inner.method == Method::Minimax) {
        if (!inner.radius && !has_constant_bias(model)) inner.radius = default_radius(model, inner.method);
    }
    // Warm shared caches before worker threads start.
    if (model.kind() == ModelKind::T3) (void)T3BiasTable::for_sample_size(n);
    const auto acc = run_chunks(settings, [&](Rng& rng) {
        const TransformedPoint z{mu0.x + rng.normal(), mu0.y + rng.normal()};
        const Observation obs = observe_gaussian(cone, z, n);
        const std::uint64_t inner_seed = derive_seed(settings.seed, static_cast<std::uint64_t>(rng.uniform() * 9007199254740992.0));
        return estimate_bias(model, inner, obs, inner_seed, Evaluation::Tabulated).value;
    });
    BiasEstimate out = from_accumulator(acc, rule.method, settings);
    out.settings["estimator"] = to_string(rule.method);
    return out;
}

GridSpec GridSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const auto pos = text.find(':', begin);
        parts.push_back(text.substr(begin, pos == std::string::npos ? std::string::npos : pos - begin));
        if (pos == std::string::npos) break;
        begin = pos + 1;
    }
    if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:step, got '" + text + "'");
    GridSpec g{parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
    if (!std::isfinite(g.start) || !std::isfinite(g.stop) || !std::isfinite(g.step)) {
        throw std::invalid_argument("grid values must be finite");
    }
    if (g.step < 0.0) throw std::invalid_argument("grid step must be >= 0");
    if (g.stop < g.start) throw std::invalid_argument("grid stop must be >= start");
    if (g.start < 0.0) throw std::invalid_argument("grid must lie in mu0y >= 0");
    return g;
}

std::vector<double> GridSpec::points() const {
    if (step == 0.0 || stop == start) return {start};
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count + 1));
    for (std::int64_t k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

std::vector<CurveRow> curve_grid(const ModelSpec& model, std::int64_t n, const std::vector<double>& grid,
                                 const std::vector<EstimatorRule>& estimators, const McSettings& settings) {
    settings.validate();
    const double nd = static_cast<double>(n);
    std::vector<CurveRow> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mu = grid[i];
        const SimplexPoint theta0 = generating_point(model, mu, n);
        const McSettings row_settings = settings.with_seed(derive_seed(settings.seed, i));
        CurveRow row;
        row.mu0y = mu;
        const BiasEstimate target = mc_target_trinomial(model, theta0, n, row_settings);
        row.target = {mu, target.value, target.std_error.value_or(0.0), nd};
        row.aicg_bias = bias_at(model, mu, nd);
        row.aic_bias = bias_aic(model).value;
        const Cone cone = cone_of(model, GeometryParams::from_mu0y(mu, nd));
        const TransformedPoint mu0 = model.kind() == ModelKind::Unconstrained || model.kind() == ModelKind::Polytomy
                                         ? TransformedPoint{}
                                         : TransformedPoint{0.0, mu};
        for (std::size_t j = 0; j < estimators.size(); ++j) {
            const McSettings est_settings = row_settings.with_seed(derive_seed(row_settings.seed, j + 1));
            const BiasEstimate e = mc_expected_estimator(model, estimators[j], cone, mu0, nd, est_settings);
            row.estimators.push_back({mu, e.value, e.std_error.value_or(0.0), nd});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> moving_average(const std::vector<double>& values, int window) {
    if (window < 1 || window % 2 == 0) throw std::invalid_argument("moving-average window must be odd and >= 1");
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    const auto size = static_cast<std::ptrdiff_t>(values.size());
    std::vector<double> out(values.size());
    for (std::ptrdiff_t i = 0; i < size; ++i) {
        const std::ptrdiff_t h = std::min({half, i, size - 1 - i});
        double s = 0.0;
        for (std::ptrdiff_t k = i - h; k <= i + h; ++k) s += values[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = s / static_cast<double>(2 * h + 1);
    }
    return out;
}

}  // namespace aicg
