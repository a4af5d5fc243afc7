#include "aicg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aicg {

SimplexPoint::SimplexPoint(double p1, double p2, double p3) : p_{p1, p2, p3} {
    for (double p : p_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw DomainError("simplex coordinates must be finite and nonnegative");
        }
    }
    if (std::abs(p1 + p2 + p3 - 1.0) > 1e-12) {
        throw DomainError("simplex coordinates must sum to 1");
    }
}

double SimplexPoint::min() const { return *std::min_element(p_.begin(), p_.end()); }

Counts::Counts(std::int64_t n1, std::int64_t n2, std::int64_t n3) : n{n1, n2, n3} {
    if (n1 < 0 || n2 < 0 || n3 < 0) throw DomainError("counts must be nonnegative");
    if (total() < 1) throw DomainError("counts must have total n >= 1");
}

SimplexPoint Counts::proportions() const {
    const double t = static_cast<double>(total());
    const double q1 = static_cast<double>(n[0]) / t;
    const double q2 = static_cast<double>(n[1]) / t;
    // Third coordinate by division too; the sum check tolerates the rounding.
    return {q1, q2, static_cast<double>(n[2]) / t};
}

double TransformedPoint::norm() const { return std::hypot(x, y); }

double phi_from_p1(double p1) {
    if (!(p1 >= 1.0 / 3.0 - 1e-15 && p1 < 1.0)) throw DomainError("p1 must lie in [1/3, 1)");
    return std::min(1.0, 1.5 * (1.0 - p1));
}

double p1_from_phi(double phi0) { return 1.0 - 2.0 / 3.0 * phi0; }

double mu0y(double phi0, double n) {
    if (!(phi0 > 0.0 && phi0 <= 1.0)) throw DomainError("phi0 must lie in (0, 1]");
    if (!(n >= 1.0)) throw DomainError("sample size must be >= 1");
    return std::sqrt(2.0 * n) * (1.0 - phi0) / std::sqrt(phi0 * (3.0 - 2.0 * phi0));
}

double phi_from_mu0y(double mu, double n) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("mu0y must be finite and >= 0");
    if (!(n >= 1.0)) throw DomainError("sample size must be >= 1");
    // Smaller root of 2(n + mu^2) phi^2 - (4n + 3mu^2) phi + 2n = 0, in the
    // cancellation-free form 2c / (b + sqrt(b^2 - 4ac)).
    const double m2 = mu * mu;
    return 4.0 * n / (4.0 * n + 3.0 * m2 + mu * std::sqrt(8.0 * n + 9.0 * m2));
}

Angles angles_from_phi0(double phi0) {
    if (!(phi0 > 0.0 && phi0 <= 1.0)) throw DomainError("phi0 must lie in (0, 1]");
    const double alpha = std::atan(1.0 / std::sqrt(3.0 * (3.0 - 2.0 * phi0)));
    return {alpha, 0.5 * (std::numbers::pi / 2.0 - alpha)};
}

GeometryParams GeometryParams::from_phi0(double phi0, double n) {
    const Angles a = angles_from_phi0(phi0);
    return {phi0, aicg::mu0y(phi0, n), a.alpha0, a.beta0, n};
}

GeometryParams GeometryParams::from_mu0y(double mu, double n) {
    const double phi = phi_from_mu0y(mu, n);
    const Angles a = angles_from_phi0(phi);
    return {phi, mu, a.alpha0, a.beta0, n};
}

SimplexPoint point_on_topology(int topology, double phi0) {
    if (topology < 1 || topology > 3) throw DomainError("topology must be 1, 2 or 3");
    std::array<double, 3> p{phi0 / 3.0, phi0 / 3.0, phi0 / 3.0};
    p[static_cast<std::size_t>(topology - 1)] = p1_from_phi(phi0);
    return {p[0], p[1], p[2]};
}

Matrix2 fisher_information(const SimplexPoint& theta) {
    if (!theta.is_interior()) throw DomainError("Fisher information is degenerate on a simplex face");
    const double c = 1.0 / theta[2];
    return {{{1.0 / theta[0] + c, c}, {c, 1.0 / theta[1] + c}}};
}

Matrix2 fisher_sqrt(const SimplexPoint& theta) {
    const Matrix2 f = fisher_information(theta);
    const double l11 = std::sqrt(f[0][0]);
    const double l21 = f[1][0] / l11;
    const double l22 = std::sqrt(f[1][1] - l21 * l21);
    return {{{l11, l21}, {0.0, l22}}};
}

double mahalanobis(const SimplexPoint& theta, const SimplexPoint& theta0, double n) {
    return mahalanobis_at(theta, theta0, theta0, n);
}

double mahalanobis_at(const SimplexPoint& theta, const SimplexPoint& origin, const SimplexPoint& info_at, double n) {
    if (!info_at.is_interior()) throw DomainError("reference point must be interior");
    // d^T I d in free coordinates equals sum_i d_i^2 / theta_i over all three
    // coordinates; sorting the terms makes the sum permutation invariant.
    std::array<double, 3> terms{};
    for (int i = 0; i < 3; ++i) {
        const double d = theta[i] - origin[i];
        terms[static_cast<std::size_t>(i)] = d * d / info_at[i];
    }
    std::sort(terms.begin(), terms.end());
    return std::sqrt(n * (terms[0] + terms[1] + terms[2]));
}

namespace {

// Free-coordinate direction of the topology-i line away from the centroid.
std::array<double, 2> topology_direction(int topology) {
    switch (topology) {
        case 1: return {2.0, -1.0};
        case 2: return {-1.0, 2.0};
        default: return {-1.0, -1.0};
    }
}

}  // namespace

SimplexTransform::SimplexTransform(const SimplexPoint& theta0, double n, int distinguished)
    : distinguished_(distinguished) {
    if (distinguished < 1 || distinguished > 3) throw DomainError("topology must be 1, 2 or 3");
    if (!(n >= 1.0)) throw DomainError("sample size must be >= 1");
    const Matrix2 m = fisher_sqrt(theta0);
    const auto d = topology_direction(distinguished);
    double ux = m[0][0] * d[0] + m[0][1] * d[1];
    double uy = m[1][0] * d[0] + m[1][1] * d[1];
    const double len = std::hypot(ux, uy);
    ux /= len;
    uy /= len;
    // Rotation taking (ux, uy) to (0, 1).
    const Matrix2 q{{{uy, -ux}, {ux, uy}}};
    const double s = std::sqrt(n);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            a_[i][j] = s * (q[i][0] * m[0][j] + q[i][1] * m[1][j]);
        }
    }
}

TransformedPoint SimplexTransform::apply_linear(double d1, double d2) const {
    return {a_[0][0] * d1 + a_[0][1] * d2, a_[1][0] * d1 + a_[1][1] * d2};
}

TransformedPoint SimplexTransform::operator()(const SimplexPoint& theta) const {
    return apply_linear(theta[0] - 1.0 / 3.0, theta[1] - 1.0 / 3.0);
}

int argmax_topology(const SimplexPoint& p) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (p[i] > p[best]) best = i;
    }
    return best + 1;
}

SimplexTransform transform_map(const SimplexPoint& theta0, double n) {
    return {theta0, n, argmax_topology(theta0)};
}

SimplexTransform transform_map(const SimplexPoint& theta0, double n, int distinguished) {
    return {theta0, n, distinguished};
}

}  // namespace aicg
