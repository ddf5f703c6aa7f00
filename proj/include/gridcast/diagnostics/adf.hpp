#pragma once

#include "gridcast/core/series.hpp"

#include <optional>

namespace gridcast::diagnostics {

/// Deterministic regression terms included in the ADF regression.
enum class AdfSpec {
    None,          // no constant, no trend
    Constant,      // constant only
    ConstantTrend, // constant and linear trend
};

struct AdfResult {
    double statistic = 0.0;   // t-ratio on the lagged level coefficient
    int used_lag = 0;         // p, the number of lagged differences
    AdfSpec spec = AdfSpec::ConstantTrend;
    double p_value = 1.0;     // clamped to [0.001, 0.999]
    double crit_1pct = 0.0;
    double crit_5pct = 0.0;
    double crit_10pct = 0.0;
    int n_obs = 0;            // observations entering the final regression
    bool stationary = false;  // p_value < 0.05
};

/**
 * Augmented Dickey-Fuller unit-root test.
 *
 * Regresses dY_t on the deterministic terms, Y_{t-1} and p lagged
 * differences.
 * When max_lag is not forced, p is chosen by minimizing AIC over
 * 0..schwert_max_lag (ties go to the smaller p), with all candidate
 * regressions sharing one sample. P-values come from log-linear
 * interpolation of the embedded Dickey-Fuller tables.
 */
AdfResult adf_test(const core::Series& s, AdfSpec spec = AdfSpec::ConstantTrend,
                   std::optional<int> max_lag = std::nullopt);
AdfResult adf_test(const std::vector<double>& values, AdfSpec spec = AdfSpec::ConstantTrend,
                   std::optional<int> max_lag = std::nullopt);

/// Schwert's rule floor(12 * (T/100)^(1/4)).
int schwert_max_lag(std::size_t n);

const char* adf_spec_name(AdfSpec spec);
AdfSpec adf_spec_from_name(const std::string& name);

} // namespace gridcast::diagnostics
