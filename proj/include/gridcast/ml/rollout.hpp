#pragma once

#include "gridcast/core/dataset.hpp"
#include "gridcast/core/series.hpp"
#include "gridcast/ml/windows.hpp"
#include "gridcast/models/forecast.hpp"
#include "gridcast/preprocess/transforms.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gridcast::ml {

/// Predicts the normalized target from a normalized feature row.
using NormalizedPredictor = std::function<double(const std::vector<double>&)>;

/**
 * Window mechanics shared by the LSTM and GBT forecasters.
 *
 * recursive_rollout appends each prediction to the lag window and steps
 * forward; exogenous futures come from future_exog or, when allowed, the
 * day-of-year climatology. Output stays on the model (transformed)
 * scale; wrap_forecast applies the chain inversion to original units.
 */
std::vector<double> recursive_rollout(const FeatureLayout& layout,
                                      const std::vector<MinMaxScale>& feature_scales,
                                      const MinMaxScale& target_scale,
                                      const NormalizedPredictor& predict,
                                      const core::Series& s_transformed, int horizon,
                                      const core::ExogMatrix* future_exog,
                                      const Climatology& climatology, bool allow_fallback);

/// One-step-ahead predictions (model scale) for target positions
/// [start, full.size()) built from actual history windows.
std::vector<double> one_step_rollout(const FeatureLayout& layout,
                                     const std::vector<MinMaxScale>& feature_scales,
                                     const MinMaxScale& target_scale,
                                     const NormalizedPredictor& predict,
                                     const core::Series& full_transformed,
                                     const core::ExogMatrix* full_exog, std::size_t start);

/// Packages model-scale predictions into a Forecast, inverting the log
/// step for original units.
models::Forecast wrap_forecast(std::vector<double> transformed, const core::Series& s,
                               const preprocess::TransformChain& chain, std::string model_name);

} // namespace gridcast::ml
