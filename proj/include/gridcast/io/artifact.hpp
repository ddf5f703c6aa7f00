#pragma once

#include "gridcast/ml/gbt.hpp"
#include "gridcast/ml/lstm.hpp"
#include "gridcast/models/arima.hpp"
#include "gridcast/models/ses.hpp"
#include "gridcast/preprocess/transforms.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace gridcast::io {

/**
 * Saved model: one family payload plus the transform chain and series
 * context. Artifacts round-trip through JSON bit-exactly (shortest
 * round-trip number formatting, sorted keys).
 */
struct ModelArtifact {
    std::string family; // arima | sarima | arimax | ses | lstm | gbt
    preprocess::TransformChain chain;
    std::string series_name = "series";
    std::string unit = "MWh";
    core::Date origin;

    std::optional<models::ArimaFit> arima;
    std::optional<models::SesFit> ses;
    std::optional<ml::LstmModel> lstm;
    std::optional<ml::GbtModel> gbt;

    /// Day-of-year exog fallback for ARIMAX forecasting (the windowed
    /// models store theirs in the payload).
    ml::Climatology exog_climatology;

    /**
     * Model-scale forecast. ARIMA/SES continue from their stored state;
     * the windowed models seed their lag window from the provided
     * (transformed) history.
     */
    std::vector<double> forecast(int horizon, const core::Series& history_transformed,
                                 const core::ExogMatrix* future_exog) const;
};

nlohmann::json model_to_json(const ModelArtifact& artifact);
ModelArtifact model_from_json(const nlohmann::json& j);

void save_model(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_model(const std::string& path);

/// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace gridcast::io
