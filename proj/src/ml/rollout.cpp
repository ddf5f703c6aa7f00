#include "gridcast/ml/rollout.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/ml/gbt.hpp"
#include "gridcast/ml/lstm.hpp"

#include <cmath>

namespace gridcast::ml {

namespace {

std::vector<double> normalize_row(const std::vector<double>& raw,
                                  const std::vector<MinMaxScale>& scales) {
    std::vector<double> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) out[j] = scales[j].normalize(raw[j]);
    return out;
}

} // namespace

std::vector<double> recursive_rollout(const FeatureLayout& layout,
                                      const std::vector<MinMaxScale>& feature_scales,
                                      const MinMaxScale& target_scale,
                                      const NormalizedPredictor& predict,
                                      const core::Series& s_transformed, int horizon,
                                      const core::ExogMatrix* future_exog,
                                      const Climatology& climatology, bool allow_fallback) {
    if (horizon < 1) throw ConfigError("forecast horizon must be >= 1");
    const std::size_t w = static_cast<std::size_t>(layout.window);
    if (s_transformed.size() < w) {
        throw TooShort("series too short to seed one lag window");
    }
    const bool wants_exog = !layout.exog_names.empty();
    if (wants_exog && future_exog) {
        if (future_exog->rows() != static_cast<std::size_t>(horizon) ||
            future_exog->cols() != layout.exog_names.size()) {
            throw MissingFutureExog("future_exog must provide one aligned row per horizon step");
        }
    }
    if (wants_exog && !future_exog && !(allow_fallback && !climatology.empty())) {
        throw MissingFutureExog("model was trained with exogenous features and no future "
                                "values or climatology fallback are available");
    }

    std::vector<double> lags(s_transformed.values().end() - static_cast<std::ptrdiff_t>(w),
                             s_transformed.values().end());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        const core::Date target_date = s_transformed.end_date() + h + 1;
        std::vector<double> exog_row;
        if (wants_exog) {
            if (future_exog) {
                exog_row.resize(future_exog->cols());
                for (std::size_t j = 0; j < exog_row.size(); ++j) {
                    exog_row[j] = future_exog->at(static_cast<std::size_t>(h), j);
                }
            } else {
                exog_row = climatology.row_for(target_date);
            }
        }
        const auto raw = layout.build_row(std::span(lags).subspan(lags.size() - w, w),
                                          target_date, exog_row);
        const double yhat_norm = predict(normalize_row(raw, feature_scales));
        const double yhat = target_scale.denormalize(yhat_norm);
        out.push_back(yhat);
        lags.push_back(yhat);
    }
    return out;
}

std::vector<double> one_step_rollout(const FeatureLayout& layout,
                                     const std::vector<MinMaxScale>& feature_scales,
                                     const MinMaxScale& target_scale,
                                     const NormalizedPredictor& predict,
                                     const core::Series& full_transformed,
                                     const core::ExogMatrix* full_exog, std::size_t start) {
    const std::size_t w = static_cast<std::size_t>(layout.window);
    if (start < w || start >= full_transformed.size()) {
        throw ConfigError("one-step start must leave a full lag window of history");
    }
    const bool wants_exog = !layout.exog_names.empty();
    if (wants_exog && (!full_exog || full_exog->rows() != full_transformed.size())) {
        throw MissingFutureExog("one-step evaluation needs exog rows aligned with the series");
    }

    const auto& y = full_transformed.values();
    std::vector<double> out;
    out.reserve(y.size() - start);
    std::vector<double> exog_row(wants_exog ? layout.exog_names.size() : 0);
    for (std::size_t t = start; t < y.size(); ++t) {
        for (std::size_t j = 0; j < exog_row.size(); ++j) exog_row[j] = full_exog->at(t, j);
        const auto raw = layout.build_row(std::span(y).subspan(t - w, w),
                                          full_transformed.date(t), exog_row);
        out.push_back(target_scale.denormalize(predict(normalize_row(raw, feature_scales))));
    }
    return out;
}

models::Forecast wrap_forecast(std::vector<double> transformed, const core::Series& s,
                               const preprocess::TransformChain& chain,
                               std::string model_name) {
    models::Forecast fc;
    fc.origin = s.end_date();
    fc.horizon = static_cast<int>(transformed.size());
    fc.model = std::move(model_name);
    fc.values_transformed = transformed;
    if (chain.log_applied) {
        for (double& v : transformed) v = std::expm1(v);
    }
    fc.values = std::move(transformed);
    return fc;
}

models::Forecast lstm_forecast(const LstmModel& m, const core::Series& s_transformed,
                               int horizon, const core::ExogMatrix* future_exog,
                               bool climatology_fallback) {
    if (m.chain.has_difference()) {
        throw ConfigError("LSTM pipelines do not difference; unexpected chain");
    }
    auto preds = recursive_rollout(
        m.layout, m.feature_scales, m.target_scale,
        [&](const std::vector<double>& row) { return m.predict_normalized(row); },
        s_transformed, horizon, future_exog, m.climatology, climatology_fallback);
    return wrap_forecast(std::move(preds), s_transformed, m.chain, "LSTM");
}

models::Forecast gbt_forecast(const GbtModel& m, const core::Series& s_transformed, int horizon,
                              const core::ExogMatrix* future_exog, bool climatology_fallback) {
    if (m.chain.has_difference()) {
        throw ConfigError("GBT pipelines do not difference; unexpected chain");
    }
    auto preds = recursive_rollout(
        m.layout, m.feature_scales, m.target_scale,
        [&](const std::vector<double>& row) { return m.predict(row); }, s_transformed, horizon,
        future_exog, m.climatology, climatology_fallback);
    return wrap_forecast(std::move(preds), s_transformed, m.chain, "XGBoost");
}

} // namespace gridcast::ml
