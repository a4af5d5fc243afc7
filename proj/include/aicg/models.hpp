#pragma once

#include <string>
#include <vector>

#include "aicg/geometry.hpp"

namespace aicg {

enum class ModelKind { T1, T3, Polytomy, Unconstrained, HalfLines };

/// Thrown by half-lines validation; `hint` names the relabeling that would fix it.
class HalfLinesError : public std::invalid_argument {
public:
    HalfLinesError(const std::string& what, std::string hint)
        : std::invalid_argument(what), hint_(std::move(hint)) {}
    const std::string& hint() const { return hint_; }

private:
    std::string hint_;
};

class ModelSpec {
public:
    static ModelSpec t1(int topology);
    static ModelSpec t3();
    static ModelSpec polytomy();
    static ModelSpec unconstrained();
    /// Validated half-lines model; see validate_halflines().
    static ModelSpec halflines(std::vector<double> angles);

    ModelKind kind() const { return kind_; }
    int topology() const { return topology_; }
    const std::vector<double>& angles() const { return angles_; }

    /// Sector widths phi_i = alpha_i - alpha_{i-1}, alpha_0 = 0.
    std::vector<double> sectors() const;

    /// Dimension of the parameter space as a naive parameter count.
    int dimension() const;

    /// Stable identifier: "t1:2", "t3", "polytomy", "unconstrained", "halflines:l".
    std::string id() const;

    /// True for models with a simplex parameter space (everything but half-lines).
    bool on_simplex() const { return kind_ != ModelKind::HalfLines; }

    bool operator==(const ModelSpec&) const = default;

private:
    friend ModelSpec validate_halflines(std::vector<double> angles);

    ModelSpec(ModelKind kind, int topology, std::vector<double> angles)
        : kind_(kind), topology_(topology), angles_(std::move(angles)) {}

    ModelKind kind_;
    int topology_ = 0;
    std::vector<double> angles_;
};

/// Parses "t1", "t1:2", "t3", "polytomy", "unconstrained" (case-insensitive).
ModelSpec parse_model(const std::string& text);

/// Accepts iff the angles strictly increase within (0, 2pi], the last equals
/// 2pi, and the first sector is a largest one. Throws HalfLinesError otherwise.
ModelSpec validate_halflines(std::vector<double> angles);

/// Rotates a ray set so the largest sector comes first, as validate_halflines() requires.
std::vector<double> canonical_halflines(std::vector<double> angles);

struct MLEResult {
    SimplexPoint estimate = SimplexPoint::centroid();
    double neg2loglik = 0.0;
    bool at_vertex_of_cone = false;
};

/// -2 sum n_i log p_i with 0 log 0 = 0, multinomial coefficient omitted.
/// Returns +inf when a positive count meets a zero probability.
double neg2loglik_at(const Counts& counts, const SimplexPoint& p);

/// Constrained maximum-likelihood estimate on the closed simplex.
MLEResult mle_simplex(const ModelSpec& model, const Counts& counts);

/// The model's tangent cone in the transformed plane.
struct Cone {
    std::vector<double> ray_angles;  ///< sorted ascending, each in (0, 2pi]
    bool whole_plane = false;

    bool is_point() const { return !whole_plane && ray_angles.empty(); }
};

Cone cone_of(const ModelSpec& model, const GeometryParams& geometry);

/// Euclidean projection of w onto the cone; ties between rays go to the smallest angle.
TransformedPoint project_transformed(const Cone& cone, const TransformedPoint& w);

/// Whether w lies on the cone within `tol`.
bool on_cone(const Cone& cone, const TransformedPoint& w, double tol = 1e-9);

}  // namespace aicg
