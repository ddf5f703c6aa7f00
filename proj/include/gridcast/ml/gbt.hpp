#pragma once

#include "gridcast/core/series.hpp"
#include "gridcast/ml/windows.hpp"
#include "gridcast/models/forecast.hpp"
#include "gridcast/preprocess/transforms.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gridcast::ml {

struct GbtConfig {
    int n_trees = 200;        // Table-4 preset
    double learning_rate = 0.01;
    int max_depth = 3;
    double gamma = 0.0;       // per-leaf penalty in the split gain
    double lambda = 1.0;      // L2 penalty on leaf weights
};

/// Binary regression tree stored as a node pool. Internal nodes route
/// x[feature] < threshold to the left child; leaves carry a weight.
struct GbtTree {
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double weight = 0.0;
        bool is_leaf() const { return feature < 0; }
    };
    std::vector<Node> nodes;

    double predict(std::span<const double> row) const;
    int leaf_count() const;
    int depth() const;
};

struct GbtModel {
    GbtConfig config;
    double base = 0.0; // initial prediction (target mean)
    std::vector<GbtTree> trees;
    std::vector<double> loss_trace; // training MSE after each tree

    // Pipeline context for windowed forecasting.
    FeatureLayout layout;
    std::vector<MinMaxScale> feature_scales;
    MinMaxScale target_scale;
    preprocess::TransformChain chain;
    Climatology climatology;
    core::Date origin;
    std::string series_name = "series";
    std::string unit = "MWh";

    /// base + eta * sum of tree outputs.
    double predict(std::span<const double> row) const;
};

/**
 * Gradient-boosted trees for squared error: per-sample gradient
 * g = yhat - y, hessian 1; exact greedy split search over sorted feature
 * values with gain
 *   1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)] - gamma
 * and leaf weight -G/(H+lambda). Splits with non-positive gain are
 * pruned. Deterministic: ties resolve to the first (feature, threshold)
 * in scan order.
 */
GbtModel gbt_fit_matrix(const std::vector<std::vector<double>>& features,
                        const std::vector<double>& targets, const GbtConfig& cfg);

/// Trains on the normalized samples of a supervised set and keeps the
/// normalization constants for prediction.
GbtModel gbt_fit(const SupervisedSet& data, const GbtConfig& cfg);

/// Recursive multi-step forecast with the same window mechanics as the
/// LSTM rollout.
models::Forecast gbt_forecast(const GbtModel& m, const core::Series& s_transformed, int horizon,
                              const core::ExogMatrix* future_exog = nullptr,
                              bool climatology_fallback = true);

} // namespace gridcast::ml
