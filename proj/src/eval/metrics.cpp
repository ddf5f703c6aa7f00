#include "gridcast/eval/metrics.hpp"
#include "gridcast/core/errors.hpp"

#include <cmath>
#include <limits>

namespace gridcast::eval {

Metrics compute_metrics(std::span<const double> actual, std::span<const double> predicted,
                        std::string scale) {
    if (actual.size() != predicted.size()) {
        throw LengthMismatch("compute_metrics: actual and predicted lengths differ");
    }
    if (actual.empty()) throw LengthMismatch("compute_metrics: empty inputs");

    Metrics m;
    m.n = actual.size();
    m.scale = std::move(scale);

    double sq = 0.0, abs_sum = 0.0, pct_sum = 0.0;
    bool mape_ok = true;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        sq += e * e;
        abs_sum += std::abs(e);
        if (actual[i] == 0.0) {
            mape_ok = false;
        } else if (mape_ok) {
            pct_sum += std::abs(e / actual[i]);
        }
    }
    const double n = static_cast<double>(m.n);
    m.mse = sq / n;
    m.rmse = std::sqrt(m.mse);
    m.mae = abs_sum / n;
    m.mape_defined = mape_ok;
    if (mape_ok) {
        m.mape = 100.0 * pct_sum / n;
        m.mapa = 100.0 - m.mape;
    } else {
        m.mape = std::numeric_limits<double>::quiet_NaN();
        m.mapa = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

} // namespace gridcast::eval
