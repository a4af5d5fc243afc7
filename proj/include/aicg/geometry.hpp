#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace aicg {

/// Interior tolerance: a simplex point with a coordinate below this is on a face.
inline constexpr double kFaceTolerance = 1e-9;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A probability triple on the closed 2-simplex.
///
/// Construction validates nonnegativity and unit sum (within 1e-12). Points on
/// the simplex faces are representable, since MLEs and sample means land there
/// for extreme counts; `is_interior()` separates them from the open simplex.
class SimplexPoint {
public:
    SimplexPoint(double p1, double p2, double p3);

    static SimplexPoint centroid() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }

    double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
    const std::array<double, 3>& values() const { return p_; }
    double min() const;
    bool is_interior(double tol = kFaceTolerance) const { return min() >= tol; }

private:
    std::array<double, 3> p_;
};

/// Observed trinomial sample.
struct Counts {
    std::array<std::int64_t, 3> n{};

    Counts() = default;
    Counts(std::int64_t n1, std::int64_t n2, std::int64_t n3);

    std::int64_t operator[](int i) const { return n[static_cast<std::size_t>(i)]; }
    std::int64_t total() const { return n[0] + n[1] + n[2]; }
    SimplexPoint proportions() const;
};

struct TransformedPoint {
    double x = 0.0;
    double y = 0.0;

    double norm() const;
    double dot(const TransformedPoint& o) const { return x * o.x + y * o.y; }
    TransformedPoint operator-(const TransformedPoint& o) const { return {x - o.x, y - o.y}; }
    TransformedPoint operator+(const TransformedPoint& o) const { return {x + o.x, y + o.y}; }
    TransformedPoint operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const TransformedPoint&) const = default;
};

/// Scalar geometry of a generating parameter on a rooted-triple line.
struct GeometryParams {
    double phi0 = 1.0;   ///< p_max = 1 - (2/3) phi0
    double mu0y = 0.0;   ///< Mahalanobis distance from the centroid
    double alpha0 = 0.0; ///< angle of the two lower T3 rays below the x-axis
    double beta0 = 0.0;  ///< bisector angle between the +y ray and the lower-right ray
    double n = 1.0;

    static GeometryParams from_phi0(double phi0, double n);
    static GeometryParams from_mu0y(double mu0y, double n);
};

double phi_from_p1(double p1);
double p1_from_phi(double phi0);

/// sqrt(2n) (1 - phi0) / sqrt(phi0 (3 - 2 phi0)).
double mu0y(double phi0, double n);

/// Inverse of mu0y() in phi0 at fixed n; returns the root in (0, 1].
double phi_from_mu0y(double mu0y, double n);

struct Angles {
    double alpha0;
    double beta0;
};
Angles angles_from_phi0(double phi0);

/// Point (1 - 2phi/3, phi/3, phi/3) rotated so the large coordinate sits at `topology` (1..3).
SimplexPoint point_on_topology(int topology, double phi0);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Per-observation Fisher information of the trinomial in free coordinates (p1, p2).
Matrix2 fisher_information(const SimplexPoint& theta);

/// Upper-triangular R with R^T R = I(theta), i.e. the transpose of the Cholesky factor.
Matrix2 fisher_sqrt(const SimplexPoint& theta);

/// sqrt(n (theta - theta0)^T I(theta0) (theta - theta0)).
double mahalanobis(const SimplexPoint& theta, const SimplexPoint& theta0, double n);

/// sqrt(n (theta - origin)^T I(info_at) (theta - origin)).
double mahalanobis_at(const SimplexPoint& theta, const SimplexPoint& origin, const SimplexPoint& info_at, double n);

/// Affine map from the simplex into the transformed plane.
///
/// theta -> Q sqrt(n) I(theta0)^{1/2} (theta - centroid), where Q is the
/// rotation carrying the direction of the `distinguished` topology line onto
/// the +y axis. The centroid maps to the origin and a theta0 lying on the
/// distinguished line maps to (0, mu0y).
class SimplexTransform {
public:
    SimplexTransform(const SimplexPoint& theta0, double n, int distinguished);

    TransformedPoint operator()(const SimplexPoint& theta) const;
    /// Image of a direction (difference of simplex points, free coordinates).
    TransformedPoint apply_linear(double d1, double d2) const;

    const Matrix2& matrix() const { return a_; }
    int distinguished() const { return distinguished_; }

private:
    Matrix2 a_{};
    int distinguished_ = 1;
};

/// Index (1..3) of the largest coordinate, ties to the smallest index.
int argmax_topology(const SimplexPoint& p);

/// Map with the distinguished topology taken as argmax of theta0.
SimplexTransform transform_map(const SimplexPoint& theta0, double n);
SimplexTransform transform_map(const SimplexPoint& theta0, double n, int distinguished);

}  // namespace aicg
