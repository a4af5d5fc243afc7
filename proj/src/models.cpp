#include "aicg/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

namespace aicg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleTol = 1e-12;

// Unit direction, exact on the coordinate axes.
std::array<double, 2> unit(double a) {
    if (a == std::numbers::pi / 2.0) return {0.0, 1.0};
    if (a == std::numbers::pi) return {-1.0, 0.0};
    if (a == 1.5 * std::numbers::pi) return {0.0, -1.0};
    if (a == kTwoPi) return {1.0, 0.0};
    return {std::cos(a), std::sin(a)};
}

std::vector<double> sector_widths(const std::vector<double>& angles) {
    std::vector<double> out;
    out.reserve(angles.size());
    double prev = 0.0;
    for (double a : angles) {
        out.push_back(a - prev);
        prev = a;
    }
    return out;
}

}  // namespace

ModelSpec ModelSpec::t1(int topology) {
    if (topology < 1 || topology > 3) throw std::invalid_argument("T1 topology must be 1, 2 or 3");
    return {ModelKind::T1, topology, {}};
}

ModelSpec ModelSpec::t3() { return {ModelKind::T3, 0, {}}; }
ModelSpec ModelSpec::polytomy() { return {ModelKind::Polytomy, 0, {}}; }
ModelSpec ModelSpec::unconstrained() { return {ModelKind::Unconstrained, 0, {}}; }

ModelSpec ModelSpec::halflines(std::vector<double> angles) {
    return validate_halflines(std::move(angles));
}

std::vector<double> ModelSpec::sectors() const { return sector_widths(angles_); }

int ModelSpec::dimension() const {
    switch (kind_) {
        case ModelKind::Polytomy: return 0;
        case ModelKind::Unconstrained: return 2;
        default: return 1;
    }
}

std::string ModelSpec::id() const {
    switch (kind_) {
        case ModelKind::T1: return "t1:" + std::to_string(topology_);
        case ModelKind::T3: return "t3";
        case ModelKind::Polytomy: return "polytomy";
        case ModelKind::Unconstrained: return "unconstrained";
        case ModelKind::HalfLines: return "halflines:" + std::to_string(angles_.size());
    }
    return "unknown";
}

ModelSpec parse_model(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (s == "t1") return ModelSpec::t1(1);
    if (s.rfind("t1:", 0) == 0 && s.size() == 4) {
        const int t = s[3] - '0';
        return ModelSpec::t1(t);
    }
    if (s == "t3") return ModelSpec::t3();
    if (s == "polytomy" || s == "p") return ModelSpec::polytomy();
    if (s == "unconstrained" || s == "u") return ModelSpec::unconstrained();
    throw std::invalid_argument("unknown model '" + text + "'");
}

ModelSpec validate_halflines(std::vector<double> angles) {
    if (angles.empty()) throw HalfLinesError("half-lines model needs at least one ray", "");
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double a = angles[i];
        if (!std::isfinite(a) || a <= 0.0 || a > kTwoPi + kAngleTol) {
            throw HalfLinesError("ray angle out of range (0, 2pi]", "");
        }
        if (i > 0 && !(a > angles[i - 1])) {
            throw HalfLinesError("ray angles must be strictly increasing without duplicates",
                                 "sort the angles ascending");
        }
    }
    if (std::abs(angles.back() - kTwoPi) > kAngleTol) {
        throw HalfLinesError("last ray angle must equal 2pi", "rotate so one ray lies on the +x axis");
    }
    angles.back() = kTwoPi;
    const auto widths = sector_widths(angles);
    const auto largest = std::max_element(widths.begin(), widths.end());
    if (*largest > widths.front() + kAngleTol) {
        const auto k = static_cast<std::size_t>(largest - widths.begin());
        throw HalfLinesError(
            "first sector must be a largest sector",
            "rotate by -" + std::to_string(angles[k - 1]) + " rad so the sector ending at ray " +
                std::to_string(k + 1) + " comes first");
    }
    return {ModelKind::HalfLines, 0, std::move(angles)};
}

std::vector<double> canonical_halflines(std::vector<double> angles) {
    std::sort(angles.begin(), angles.end());
    if (angles.empty()) return angles;
    // Sector i runs from ray i-1 to ray i (cyclically); find the widest.
    const std::size_t l = angles.size();
    std::size_t best = 0;
    double best_width = -1.0;
    for (std::size_t i = 0; i < l; ++i) {
        const double prev = (i == 0) ? angles[l - 1] - kTwoPi : angles[i - 1];
        const double w = angles[i] - prev;
        if (w > best_width + kAngleTol) {
            best_width = w;
            best = i;
        }
    }
    const double start = (best == 0) ? angles[l - 1] - kTwoPi : angles[best - 1];
    std::vector<double> out;
    out.reserve(l);
    for (std::size_t k = 0; k < l; ++k) {
        double a = angles[(best + k) % l] - start;
        while (a <= 0.0) a += kTwoPi;
        while (a > kTwoPi + kAngleTol) a -= kTwoPi;
        out.push_back(a);
    }
    out.back() = kTwoPi;
    return out;
}

double neg2loglik_at(const Counts& counts, const SimplexPoint& p) {
    std::array<double, 3> terms{};
    for (int i = 0; i < 3; ++i) {
        const auto ni = counts[i];
        if (ni == 0) continue;
        if (p[i] <= 0.0) return std::numeric_limits<double>::infinity();
        terms[static_cast<std::size_t>(i)] = -2.0 * static_cast<double>(ni) * std::log(p[i]);
    }
    std::sort(terms.begin(), terms.end());
    return terms[0] + terms[1] + terms[2];
}

namespace {

SimplexPoint t1_estimate(int topology, const Counts& counts) {
    const std::size_t i = static_cast<std::size_t>(topology - 1);
    const double share = static_cast<double>(counts.n[i]) / static_cast<double>(counts.total());
    const double pi = std::max(share, 1.0 / 3.0);
    const double rest = 0.5 * (1.0 - pi);
    std::array<double, 3> p{rest, rest, rest};
    p[i] = pi;
    return {p[0], p[1], p[2]};
}

MLEResult finish(const Counts& counts, const SimplexPoint& est, bool vertex) {
    return {est, neg2loglik_at(counts, est), vertex};
}

}  // namespace

MLEResult mle_simplex(const ModelSpec& model, const Counts& counts) {
    if (counts.total() < 1) throw DomainError("counts must have total n >= 1");
    const double n = static_cast<double>(counts.total());
    switch (model.kind()) {
        case ModelKind::T1: {
            const auto i = static_cast<std::size_t>(model.topology() - 1);
            const bool vertex = 3.0 * static_cast<double>(counts.n[i]) <= n;
            const SimplexPoint est = vertex ? SimplexPoint::centroid() : t1_estimate(model.topology(), counts);
            return finish(counts, est, vertex);
        }
        case ModelKind::T3: {
            const auto top = *std::max_element(counts.n.begin(), counts.n.end());
            MLEResult best;
            bool have = false;
            for (int t = 1; t <= 3; ++t) {
                if (counts[t - 1] != top) continue;
                MLEResult r = mle_simplex(ModelSpec::t1(t), counts);
                if (!have || r.neg2loglik < best.neg2loglik) {
                    best = r;
                    have = true;
                }
            }
            return best;
        }
        case ModelKind::Polytomy:
            return finish(counts, SimplexPoint::centroid(), true);
        case ModelKind::Unconstrained:
            return finish(counts, counts.proportions(), false);
        case ModelKind::HalfLines:
            break;
    }
    throw std::invalid_argument("half-lines model has no simplex parameter space");
}

Cone cone_of(const ModelSpec& model, const GeometryParams& geometry) {
    Cone c;
    switch (model.kind()) {
        case ModelKind::T1:
            c.ray_angles = {std::numbers::pi / 2.0};
            break;
        case ModelKind::T3:
            c.ray_angles = {std::numbers::pi / 2.0, std::numbers::pi + geometry.alpha0,
                            kTwoPi - geometry.alpha0};
            break;
        case ModelKind::Polytomy:
            break;
        case ModelKind::Unconstrained:
            c.whole_plane = true;
            break;
        case ModelKind::HalfLines:
            c.ray_angles = model.angles();
            break;
    }
    std::sort(c.ray_angles.begin(), c.ray_angles.end());
    return c;
}

TransformedPoint project_transformed(const Cone& cone, const TransformedPoint& w) {
    if (cone.whole_plane) return w;
    TransformedPoint best{0.0, 0.0};
    double best_d2 = std::numeric_limits<double>::infinity();
    for (double a : cone.ray_angles) {
        const auto [dx, dy] = unit(a);
        const double t = std::max(0.0, w.x * dx + w.y * dy);
        const TransformedPoint cand{t * dx, t * dy};
        const TransformedPoint diff = w - cand;
        const double d2 = diff.dot(diff);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = cand;
        }
    }
    if (cone.ray_angles.empty()) return {0.0, 0.0};
    return best;
}

bool on_cone(const Cone& cone, const TransformedPoint& w, double tol) {
    return (project_transformed(cone, w) - w).norm() <= tol;
}

}  // namespace aicg
