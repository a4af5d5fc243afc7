#include "aicg/bias_t3.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "aicg/quadrature.hpp"
#include "aicg/special.hpp"

namespace aicg {

void QuadratureSettings::validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be positive");
    if (!(r_max_offset >= 8.0)) throw std::invalid_argument("r_max_offset must be at least 8");
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be positive");
}

double g_integrand(double r, double phi, double mu0y, double alpha0) {
    const double c = std::cos(phi + alpha0);
    return r * (r * r * c * c - mu0y * r * (std::sin(phi) - std::sin(alpha0) * c) + mu0y * mu0y);
}

T3Parts bias_t3_parts(double mu0y, double alpha0, const QuadratureSettings& settings) {
    settings.validate();
    if (!(mu0y >= 0.0) || !std::isfinite(mu0y)) throw DomainError("mu0y must be finite and nonnegative");
    if (!(alpha0 > 0.0 && alpha0 <= std::numbers::pi / 6.0 + 1e-15)) {
        throw DomainError("alpha0 must lie in (0, pi/6]");
    }
    const double beta0 = 0.5 * (std::numbers::pi / 2.0 - alpha0);
    const double cot_beta = 1.0 / std::tan(beta0);
    const double upper = mu0y + settings.r_max_offset;
    const double tol = settings.abs_tol;

    const auto vertical = [&](double y) {
        const double d = y - mu0y;
        return d * d * std::exp(-0.5 * d * d) * erf(y * cot_beta / std::numbers::sqrt2);
    };
    const QuadratureResult first = quad_adaptive_1d(vertical, 0.0, upper, 0.25 * tol, settings.max_subdivisions);

    const double span = beta0 + std::numbers::pi / 2.0;
    const double inner_tol = 0.25 * tol / span;
    double inner_error = 0.0;
    const auto outer = [&](double phi) {
        const double s = std::sin(phi);
        const auto radial = [&](double r) {
            return g_integrand(r, phi, mu0y, alpha0) * std::exp(-0.5 * (r * r - 2.0 * mu0y * r * s + mu0y * mu0y));
        };
        const QuadratureResult in = quad_adaptive_1d(radial, 0.0, upper, inner_tol, settings.max_subdivisions);
        inner_error = std::max(inner_error, in.abs_error);
        return in.value;
    };
    const QuadratureResult second =
        quad_adaptive_1d(outer, -std::numbers::pi / 2.0, beta0, 0.25 * tol, settings.max_subdivisions);

    T3Parts parts;
    parts.vertical_region = std::sqrt(2.0 / std::numbers::pi) * first.value;
    parts.lower_region = 2.0 / std::numbers::pi * second.value;
    parts.error_estimate = std::sqrt(2.0 / std::numbers::pi) * first.abs_error +
                           2.0 / std::numbers::pi * (second.abs_error + span * inner_error);
    return parts;
}

BiasEstimate bias_t3(double mu0y, double alpha0, const QuadratureSettings& settings) {
    const T3Parts parts = bias_t3_parts(mu0y, alpha0, settings);
    BiasEstimate out{parts.vertical_region + parts.lower_region, Method::Quadrature, std::nullopt, {}};
    const double R = settings.r_max_offset;
    out.settings["abs_tol"] = std::to_string(settings.abs_tol);
    out.settings["r_max_offset"] = std::to_string(R);
    out.settings["error_estimate"] = std::to_string(parts.error_estimate);
    // Mass-weighted tail beyond the truncation radius: int_R^inf t^3 e^{-t^2/2} dt.
    out.settings["tail_bound"] = std::to_string((R * R + 2.0) * std::exp(-0.5 * R * R));
    return out;
}

T3BiasTable::T3BiasTable(double n, double mu_max, double step) : n_(n), step_(step) {
    if (!(step > 0.0) || !(mu_max > step)) throw std::invalid_argument("bad T3 table grid");
    const auto count = static_cast<std::size_t>(std::ceil(mu_max / step)) + 1;
    values_.resize(count);
    slopes_.resize(count);
    QuadratureSettings qs;
    qs.abs_tol = 1e-10;
    for (std::size_t i = 0; i < count; ++i) {
        const auto g = GeometryParams::from_mu0y(static_cast<double>(i) * step, n);
        values_[i] = bias_t3(g.mu0y, g.alpha0, qs).value;
    }
    // Finite-difference slopes for cubic Hermite interpolation.
    for (std::size_t i = 0; i < count; ++i) {
        if (i == 0) {
            slopes_[i] = (values_[1] - values_[0]) / step;
        } else if (i + 1 == count) {
            slopes_[i] = (values_[i] - values_[i - 1]) / step;
        } else {
            slopes_[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * step);
        }
    }
}

double T3BiasTable::operator()(double mu) const {
    if (!(mu >= 0.0)) throw DomainError("mu must be nonnegative");
    const double pos = mu / step_;
    if (pos >= static_cast<double>(values_.size() - 1)) return values_.back();
    const auto i = static_cast<std::size_t>(pos);
    const double t = pos - static_cast<double>(i);
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] + h11 * step_ * slopes_[i + 1];
}

const T3BiasTable& T3BiasTable::for_sample_size(double n) {
    static std::mutex mutex;
    static std::map<double, std::unique_ptr<T3BiasTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<T3BiasTable>(n);
    return *slot;
}

}  // namespace aicg
