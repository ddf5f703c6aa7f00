#include "gridcast/ml/gbt.hpp"
#include "gridcast/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace gridcast::ml {

namespace {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

double leaf_objective(double grad_sum, double hess_sum, double lambda) {
    return grad_sum * grad_sum / (hess_sum + lambda);
}

// Exact greedy search: scan every feature's sorted values; candidate
// thresholds sit between consecutive distinct values.
SplitChoice best_split(const std::vector<std::vector<double>>& features,
                       const std::vector<double>& grad, const std::vector<int>& index,
                       const GbtConfig& cfg) {
    const double total_g = std::accumulate(index.begin(), index.end(), 0.0,
                                           [&](double a, int i) { return a + grad[i]; });
    const double total_h = static_cast<double>(index.size());
    const double parent = leaf_objective(total_g, total_h, cfg.lambda);

    SplitChoice best;
    const std::size_t n_features = features.front().size();
    std::vector<std::pair<double, double>> sorted; // (value, grad)
    sorted.reserve(index.size());
    for (std::size_t f = 0; f < n_features; ++f) {
        sorted.clear();
        for (int i : index) sorted.emplace_back(features[static_cast<std::size_t>(i)][f], grad[i]);
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        double g_left = 0.0, h_left = 0.0;
        for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
            g_left += sorted[k].second;
            h_left += 1.0;
            if (sorted[k].first == sorted[k + 1].first) continue;
            const double g_right = total_g - g_left;
            const double h_right = total_h - h_left;
            const double gain = 0.5 * (leaf_objective(g_left, h_left, cfg.lambda) +
                                       leaf_objective(g_right, h_right, cfg.lambda) - parent) -
                                cfg.gamma;
            if (gain > best.gain + 1e-12 || (!best.found && gain > 0.0)) {
                best.found = true;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
                best.gain = gain;
            }
        }
    }
    return best;
}

int grow_node(GbtTree& tree, const std::vector<std::vector<double>>& features,
              const std::vector<double>& grad, std::vector<int>&& index, int depth,
              const GbtConfig& cfg) {
    const double g_sum = std::accumulate(index.begin(), index.end(), 0.0,
                                         [&](double a, int i) { return a + grad[i]; });
    const double h_sum = static_cast<double>(index.size());

    SplitChoice split;
    if (depth < cfg.max_depth && index.size() >= 2) {
        split = best_split(features, grad, index, cfg);
    }
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (!split.found) {
        tree.nodes[static_cast<std::size_t>(id)].weight = -g_sum / (h_sum + cfg.lambda);
        return id;
    }

    std::vector<int> left_idx, right_idx;
    for (int i : index) {
        if (features[static_cast<std::size_t>(i)][static_cast<std::size_t>(split.feature)] <
            split.threshold) {
            left_idx.push_back(i);
        } else {
            right_idx.push_back(i);
        }
    }
    index.clear();
    const int left = grow_node(tree, features, grad, std::move(left_idx), depth + 1, cfg);
    const int right = grow_node(tree, features, grad, std::move(right_idx), depth + 1, cfg);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
}

} // namespace

double GbtTree::predict(std::span<const double> row) const {
    int at = 0;
    while (!nodes[static_cast<std::size_t>(at)].is_leaf()) {
        const auto& n = nodes[static_cast<std::size_t>(at)];
        at = (row[static_cast<std::size_t>(n.feature)] < n.threshold) ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].weight;
}

int GbtTree::leaf_count() const {
    int count = 0;
    for (const auto& n : nodes) count += n.is_leaf() ? 1 : 0;
    return count;
}

int GbtTree::depth() const {
    // Depth via recursive walk; the pool is small.
    std::function<int(int)> walk = [&](int id) -> int {
        const auto& n = nodes[static_cast<std::size_t>(id)];
        if (n.is_leaf()) return 0;
        return 1 + std::max(walk(n.left), walk(n.right));
    };
    return nodes.empty() ? 0 : walk(0);
}

double GbtModel::predict(std::span<const double> row) const {
    double acc = base;
    for (const auto& tree : trees) acc += config.learning_rate * tree.predict(row);
    return acc;
}

GbtModel gbt_fit_matrix(const std::vector<std::vector<double>>& features,
                        const std::vector<double>& targets, const GbtConfig& cfg) {
    if (features.empty() || targets.size() != features.size()) {
        throw EmptyData("gbt_fit: no samples or misaligned targets");
    }
    if (cfg.learning_rate <= 0.0 || cfg.learning_rate > 1.0) {
        throw BadHyperparameter("learning rate must lie in (0,1]");
    }
    if (cfg.max_depth < 1) throw BadHyperparameter("max_depth must be >= 1");
    if (cfg.n_trees < 1) throw BadHyperparameter("n_trees must be >= 1");
    if (cfg.lambda < 0.0 || cfg.gamma < 0.0) {
        throw BadHyperparameter("lambda and gamma must be non-negative");
    }

    const std::size_t n = targets.size();
    GbtModel model;
    model.config = cfg;
    model.base = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(n);

    std::vector<double> yhat(n, model.base);
    std::vector<double> grad(n);
    std::vector<int> all_index(n);
    std::iota(all_index.begin(), all_index.end(), 0);

    model.trees.reserve(static_cast<std::size_t>(cfg.n_trees));
    model.loss_trace.reserve(static_cast<std::size_t>(cfg.n_trees));
    for (int t = 0; t < cfg.n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) grad[i] = yhat[i] - targets[i];
        GbtTree tree;
        std::vector<int> root_index = all_index;
        grow_node(tree, features, grad, std::move(root_index), 0, cfg);

        double mse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            yhat[i] += cfg.learning_rate * tree.predict(features[i]);
            const double e = yhat[i] - targets[i];
            mse += e * e;
        }
        model.trees.push_back(std::move(tree));
        model.loss_trace.push_back(mse / static_cast<double>(n));
    }
    return model;
}

GbtModel gbt_fit(const SupervisedSet& data, const GbtConfig& cfg) {
    const std::size_t n = data.size();
    const std::size_t nf = data.n_features();
    std::vector<std::vector<double>> rows(n, std::vector<double>(nf));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < nf; ++j) rows[i][j] = data.feature_norm(i, j);
    }
    GbtModel model = gbt_fit_matrix(rows, data.normalized_targets(), cfg);
    model.layout = data.layout();
    model.feature_scales = data.feature_scales();
    model.target_scale = data.target_scale();
    return model;
}

} // namespace gridcast::ml
