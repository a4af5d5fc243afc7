#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aicg/estimators.hpp"

namespace aicg {

struct ScoreRow {
    std::string model_id;
    std::optional<SimplexPoint> estimate;
    double neg2loglik = 0.0;
    BiasEstimate bias;
    double aicg = 0.0;
    double aic = 0.0;
    int rank_aicg = 0;  ///< 1-based; 0 for rows with an error
    int rank_aic = 0;
    std::optional<double> weight;  ///< Akaike-style weight from AICg
    std::string error;             ///< non-empty when the estimator failed for this model

    bool ok() const { return error.empty(); }
};

/// Rows sorted by AICg (ties by model id); failed rows last.
struct SelectionReport {
    std::vector<ScoreRow> rows;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    EstimatorRule rule;
    std::string note = "-2 log L omits the multinomial coefficient, common to all models";

    const ScoreRow* winner() const;
};

SelectionReport score(const std::vector<ModelSpec>& models, const Counts& counts, const EstimatorRule& rule,
                      std::uint64_t seed, bool with_weights = false);

/// Sum-preserving largest-remainder rounding of n * p; remainder ties go to the lower index.
Counts pseudo_counts(const SimplexPoint& p, std::int64_t n);

/// Winning model id, or "tie" when the two best AICg values agree within 1e-9.
std::string winner_label(const SelectionReport& report);

struct RegionCell {
    int i = 0;
    int j = 0;
    int k = 0;
    Counts counts;
    std::string winner;

    SimplexPoint point(int resolution) const;
};

/// Lattice points (i, j, k)/resolution with i + j + k = resolution, row-major in (i, j).
struct RegionGrid {
    int resolution = 0;
    std::int64_t n = 0;
    std::vector<std::string> model_ids;
    std::vector<RegionCell> cells;

    std::size_t index(int i, int j) const;
    const RegionCell& at(int i, int j) const { return cells[index(i, j)]; }
};

RegionGrid region_grid(const std::vector<ModelSpec>& models, std::int64_t n, int resolution, const EstimatorRule& rule,
                       std::uint64_t seed, int workers = 0);

/// Cells whose label differs from the label at the permuted lattice point, ties excluded.
/// `perm[a]` is the coordinate that moves into position a.
std::int64_t symmetry_violations(const RegionGrid& grid, const std::array<int, 3>& perm);

/// Whether the cells labeled `label` form one lattice-connected set (6-neighborhood).
bool label_connected(const RegionGrid& grid, const std::string& label);

/// Lattice cells nearest the centroid.
std::vector<const RegionCell*> centroid_cells(const RegionGrid& grid);

}  // namespace aicg
