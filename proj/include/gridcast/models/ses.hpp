#pragma once

#include "gridcast/core/series.hpp"
#include "gridcast/models/forecast.hpp"
#include "gridcast/preprocess/transforms.hpp"

#include <optional>
#include <vector>

namespace gridcast::models {

/// Simple exponential smoothing state: the smoothing factor, the level at
/// the series end, and the in-sample one-step forecasts.
struct SesFit {
    double alpha = 0.5;
    bool alpha_estimated = false;
    double final_level = 0.0;
    std::vector<double> fitted; // y_hat_1..y_hat_T (y_hat_1 = y_1)
    double sse = 0.0;
};

/**
 * Level recursion y_hat_{t+1} = alpha * y_t + (1 - alpha) * y_hat_t with
 * y_hat_1 = y_1. When alpha is absent it minimizes the in-sample SSE by
 * golden-section search. Horizon forecasts are flat at the final level.
 */
std::pair<SesFit, Forecast> ses_forecast(const core::Series& s, std::optional<double> alpha,
                                         int horizon,
                                         const preprocess::TransformChain& chain = {});

/// One-step forecasts over [start, full.size()) with a fixed alpha, the
/// level updated from actual observations.
std::vector<double> ses_one_step(const SesFit& fit, const core::Series& full,
                                 std::size_t start);

} // namespace gridcast::models
