#pragma once

#include <span>
#include <string>

namespace gridcast::eval {

/**
 * Forecast accuracy metrics. MAPE/MAPA are undefined (NaN, flag false)
 * whenever an actual value is zero; the remaining metrics still apply.
 * rmse^2 == mse and mapa == 100 - mape hold by construction.
 */
struct Metrics {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double mape = 0.0; // percent
    double mapa = 0.0; // percent
    bool mape_defined = true;
    std::size_t n = 0;
    std::string scale = "original"; // original | transformed
};

Metrics compute_metrics(std::span<const double> actual, std::span<const double> predicted,
                        std::string scale = "original");

} // namespace gridcast::eval
