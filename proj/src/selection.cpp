#include "aicg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <queue>

namespace aicg {

namespace {

std::uint64_t id_hash(const std::string& id) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

const ScoreRow* SelectionReport::winner() const {
    return !rows.empty() && rows.front().ok() ? &rows.front() : nullptr;
}

SelectionReport score(const std::vector<ModelSpec>& models, const Counts& counts, const EstimatorRule& rule,
                      std::uint64_t seed, bool with_weights) {
    if (models.empty()) throw std::invalid_argument("at least one model is required");
    if (counts.total() < 1) throw std::invalid_argument("counts must sum to at least 1");
    rule.validate();
    SelectionReport report;
    report.n = counts.total();
    report.seed = seed;
    report.rule = rule;
    for (const ModelSpec& model : models) {
        ScoreRow row;
        row.model_id = model.id();
        try {
            const MLEResult fit = mle_simplex(model, counts);
            row.estimate = fit.estimate;
            row.neg2loglik = fit.neg2loglik;
            const Observation obs = observe_counts(model, counts);
            row.bias = estimate_bias(model, rule, obs, derive_seed(seed, id_hash(row.model_id)));
            row.aicg = row.neg2loglik + row.bias.value;
            row.aic = row.neg2loglik + bias_aic(model).value;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    auto& rows = report.rows;
    const auto by = [](double ScoreRow::*field) {
        return [field](const ScoreRow& a, const ScoreRow& b) {
            if (a.ok() != b.ok()) return a.ok();
            if (a.ok() && a.*field != b.*field) return a.*field < b.*field;
            return a.model_id < b.model_id;
        };
    };
    std::sort(rows.begin(), rows.end(), by(&ScoreRow::aic));
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank_aic = rows[i].ok() ? static_cast<int>(i) + 1 : 0;
    std::sort(rows.begin(), rows.end(), by(&ScoreRow::aicg));
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank_aicg = rows[i].ok() ? static_cast<int>(i) + 1 : 0;
    if (with_weights && rows.front().ok()) {
        const double best = rows.front().aicg;
        double total = 0.0;
        for (const auto& r : rows) {
            if (r.ok()) total += std::exp(-0.5 * (r.aicg - best));
        }
        for (auto& r : rows) {
            if (r.ok()) r.weight = std::exp(-0.5 * (r.aicg - best)) / total;
        }
    }
    return report;
}

Counts pseudo_counts(const SimplexPoint& p, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::array<std::int64_t, 3> base{};
    std::array<double, 3> rem{};
    std::int64_t used = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = static_cast<double>(n) * p[i];
        const double fl = std::floor(exact + 1e-9);
        base[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(fl);
        rem[static_cast<std::size_t>(i)] = std::max(0.0, exact - fl);
        used += base[static_cast<std::size_t>(i)];
    }
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return rem[static_cast<std::size_t>(a)] > rem[static_cast<std::size_t>(b)];
    });
    for (std::int64_t k = 0; used < n; ++k, ++used) ++base[static_cast<std::size_t>(order[static_cast<std::size_t>(k % 3)])];
    for (std::int64_t k = 0; used > n; ++k) {
        auto& b = base[static_cast<std::size_t>(order[static_cast<std::size_t>(2 - k % 3)])];
        if (b > 0) {
            --b;
            --used;
        }
    }
    return {base[0], base[1], base[2]};
}

std::string winner_label(const SelectionReport& report) {
    const ScoreRow* best = report.winner();
    if (best == nullptr) return "error";
    if (report.rows.size() > 1 && report.rows[1].ok() && std::abs(report.rows[1].aicg - best->aicg) <= 1e-9) {
        return "tie";
    }
    return best->model_id;
}

SimplexPoint RegionCell::point(int resolution) const {
    const double r = resolution;
    return {i / r, j / r, k / r};
}

std::size_t RegionGrid::index(int i, int j) const {
    // Rows i = 0..R hold R - i + 1 cells each.
    const auto r = static_cast<std::size_t>(resolution);
    const auto ii = static_cast<std::size_t>(i);
    return ii * (r + 1) - ii * (ii - 1) / 2 + static_cast<std::size_t>(j);
}

RegionGrid region_grid(const std::vector<ModelSpec>& models, std::int64_t n, int resolution, const EstimatorRule& rule,
                       std::uint64_t seed, int workers) {
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    if (models.empty()) throw std::invalid_argument("at least one model is required");
    RegionGrid grid;
    grid.resolution = resolution;
    grid.n = n;
    for (const auto& m : models) grid.model_ids.push_back(m.id());
    for (int i = 0; i <= resolution; ++i) {
        for (int j = 0; j <= resolution - i; ++j) {
            RegionCell c;
            c.i = i;
            c.j = j;
            c.k = resolution - i - j;
            c.counts = pseudo_counts(c.point(resolution), n);
            grid.cells.push_back(c);
        }
    }
    parallel_for(static_cast<std::int64_t>(grid.cells.size()), workers, [&](std::int64_t idx) {
        auto& cell = grid.cells[static_cast<std::size_t>(idx)];
        cell.winner = winner_label(score(models, cell.counts, rule, derive_seed(seed, static_cast<std::uint64_t>(idx))));
    });
    return grid;
}

std::int64_t symmetry_violations(const RegionGrid& grid, const std::array<int, 3>& perm) {
    std::int64_t bad = 0;
    for (const auto& cell : grid.cells) {
        const std::array<int, 3> c{cell.i, cell.j, cell.k};
        const auto& other = grid.at(c[static_cast<std::size_t>(perm[0])], c[static_cast<std::size_t>(perm[1])]);
        if (cell.winner == "tie" || other.winner == "tie") continue;
        if (cell.winner != other.winner) ++bad;
    }
    return bad;
}

bool label_connected(const RegionGrid& grid, const std::string& label) {
    std::vector<char> seen(grid.cells.size(), 0);
    std::size_t total = 0;
    std::size_t start = grid.cells.size();
    for (std::size_t s = 0; s < grid.cells.size(); ++s) {
        if (grid.cells[s].winner == label) {
            ++total;
            if (start == grid.cells.size()) start = s;
        }
    }
    if (total == 0) return false;
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = 1;
    std::size_t reached = 0;
    constexpr std::array<std::array<int, 2>, 6> steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};
    while (!q.empty()) {
        const auto& cell = grid.cells[q.front()];
        q.pop();
        ++reached;
        for (const auto& d : steps) {
            const int i = cell.i + d[0];
            const int j = cell.j + d[1];
            if (i < 0 || j < 0 || i + j > grid.resolution) continue;
            const std::size_t idx = grid.index(i, j);
            if (!seen[idx] && grid.cells[idx].winner == label) {
                seen[idx] = 1;
                q.push(idx);
            }
        }
    }
    return reached == total;
}

std::vector<const RegionCell*> centroid_cells(const RegionGrid& grid) {
    std::vector<const RegionCell*> out;
    double best = std::numeric_limits<double>::infinity();
    const double third = grid.resolution / 3.0;
    for (const auto& cell : grid.cells) {
        const double d = std::abs(cell.i - third) + std::abs(cell.j - third) + std::abs(cell.k - third);
        if (d < best - 1e-12) {
            best = d;
            out.clear();
        }
        if (std::abs(d - best) <= 1e-12) out.push_back(&cell);
    }
    return out;
}

}  // namespace aicg
