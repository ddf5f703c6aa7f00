#include "gridcast/eval/grid_search.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/eval/metrics.hpp"
#include "gridcast/numeric/parallel.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace gridcast::eval {

namespace {

double metric_value(const Metrics& m, const std::string& id) {
    if (id == "mse") return m.mse;
    if (id == "rmse") return m.rmse;
    if (id == "mae") return m.mae;
    if (id == "mape") {
        if (!m.mape_defined) throw ConfigError("MAPE undefined on this validation block");
        return m.mape;
    }
    throw ConfigError("unknown score metric '" + id + "' (use mse|rmse|mae|mape)");
}

std::vector<ParamMap> expand_grid(const std::vector<GridAxis>& grid) {
    for (const auto& axis : grid) {
        if (axis.values.empty()) throw EmptyGrid("grid axis '" + axis.name + "' has no values");
    }
    std::vector<ParamMap> configs{ParamMap{}};
    for (const auto& axis : grid) {
        std::vector<ParamMap> next;
        next.reserve(configs.size() * axis.values.size());
        for (const auto& base : configs) {
            for (double v : axis.values) {
                ParamMap p = base;
                p[axis.name] = v;
                next.push_back(std::move(p));
            }
        }
        configs = std::move(next);
    }
    return configs;
}

} // namespace

GridResult grid_search(const std::string& family, const std::vector<GridAxis>& grid,
                       const core::Series& s, const core::ExogMatrix* exog,
                       const FoldPlan& folds, const std::string& score_metric) {
    if (grid.empty()) throw EmptyGrid("grid has no axes");
    make_forecaster(family, {}); // validates the family name up front
    const auto configs = expand_grid(grid);

    auto evaluate = [&](std::size_t idx) {
        GridConfigResult out;
        out.params = configs[idx];
        try {
            double total = 0.0;
            for (const auto& fold : folds.folds) {
                auto model = make_forecaster(family, configs[idx]);
                core::Series train = s.slice(0, fold.train_end);
                core::Series through_val = s.slice(0, fold.val_end);
                std::optional<core::ExogMatrix> train_exog, val_exog;
                if (exog) {
                    train_exog = exog->slice(0, fold.train_end);
                    val_exog = exog->slice(0, fold.val_end);
                }
                model->fit(train, train_exog ? &*train_exog : nullptr);
                auto preds = model->one_step(through_val, val_exog ? &*val_exog : nullptr,
                                             fold.train_end);
                std::vector<double> actual(s.values().begin() +
                                               static_cast<std::ptrdiff_t>(fold.train_end),
                                           s.values().begin() +
                                               static_cast<std::ptrdiff_t>(fold.val_end));
                const auto m = compute_metrics(actual, preds);
                const double score = metric_value(m, score_metric);
                out.fold_scores.push_back(score);
                total += score;
                out.parameter_count = model->parameter_count();
            }
            out.mean_score = total / static_cast<double>(folds.folds.size());
            out.ok = true;
        } catch (const std::exception& e) {
            out.mean_score = std::numeric_limits<double>::infinity();
            out.ok = false;
            out.error = e.what();
        }
        return out;
    };

    GridResult result;
    result.evaluated = numeric::parallel_map<GridConfigResult>(configs.size(), evaluate);

    bool found = false;
    for (std::size_t i = 0; i < result.evaluated.size(); ++i) {
        const auto& cand = result.evaluated[i];
        if (!cand.ok) continue;
        if (!found) {
            result.best_index = i;
            found = true;
            continue;
        }
        const auto& best = result.evaluated[result.best_index];
        if (cand.mean_score < best.mean_score) {
            result.best_index = i;
        } else if (cand.mean_score == best.mean_score &&
                   cand.parameter_count < best.parameter_count) {
            result.best_index = i;
            result.tie_break = "equal scores resolved by fewer trainable parameters";
        }
    }
    if (!found) throw NoValidModel("every grid configuration failed");
    return result;
}

} // namespace gridcast::eval
