#pragma once

#include "gridcast/eval/forecaster.hpp"
#include "gridcast/eval/split.hpp"

#include <string>
#include <vector>

namespace gridcast::eval {

/// One hyperparameter axis of the grid.
struct GridAxis {
    std::string name;
    std::vector<double> values;
};

struct GridConfigResult {
    ParamMap params;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
    long parameter_count = 0;
    bool ok = false;
    std::string error;
};

struct GridResult {
    std::vector<GridConfigResult> evaluated; // deterministic grid order
    std::size_t best_index = 0;
    std::string tie_break;

    const GridConfigResult& best() const { return evaluated[best_index]; }
};

/**
 * Exhaustive search over the Cartesian product of the axes. Each config
 * is scored by the mean one-step validation metric across the expanding
 * folds; configs failing on any fold score +inf with an error note.
 * Ties break toward fewer trainable parameters, then first in grid
 * order. Configurations evaluate in parallel with a deterministic
 * reduction.
 */
GridResult grid_search(const std::string& family, const std::vector<GridAxis>& grid,
                       const core::Series& s, const core::ExogMatrix* exog,
                       const FoldPlan& folds, const std::string& score_metric = "mse");

} // namespace gridcast::eval
