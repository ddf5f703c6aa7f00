#pragma once

#include "gridcast/core/dataset.hpp"
#include "gridcast/core/series.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gridcast::eval {

/// Numeric hyperparameters by name; integers arrive as doubles.
using ParamMap = std::map<std::string, double>;

/**
 * Uniform interface over the model families. Everything operates on the
 * scale of the series handed to fit() (the pipeline applies and inverts
 * any log transform outside this interface).
 */
class Forecaster {
public:
    virtual ~Forecaster() = default;

    virtual std::string family() const = 0;
    virtual void fit(const core::Series& train, const core::ExogMatrix* exog) = 0;

    /// Multi-step forecast from the end of the training data, model scale.
    virtual std::vector<double> forecast(int horizon,
                                         const core::ExogMatrix* future_exog) = 0;

    /// One-step-ahead predictions for positions [start, full.size()) of a
    /// series extending the training data.
    virtual std::vector<double> one_step(const core::Series& full,
                                         const core::ExogMatrix* full_exog,
                                         std::size_t start) = 0;

    /// Trainable parameter count, the grid-search tie-breaker.
    virtual long parameter_count() const = 0;
};

/**
 * Family registry. Known families: arima, sarima, arimax, ses, lstm,
 * gbt, naive. Unknown names raise UnknownFamily; unknown parameter keys
 * raise ConfigError.
 */
std::unique_ptr<Forecaster> make_forecaster(const std::string& family, const ParamMap& params);
std::vector<std::string> registered_families();

double param_or(const ParamMap& params, const std::string& key, double fallback);

} // namespace gridcast::eval
