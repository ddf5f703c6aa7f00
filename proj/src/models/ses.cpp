#include "gridcast/models/ses.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/numeric/optimize.hpp"

#include <cmath>

namespace gridcast::models {

namespace {

// Runs the level recursion; returns (fitted values, final level, SSE).
// The SSE skips t = 1, whose "forecast" is pinned to the observation.
struct Pass {
    std::vector<double> fitted;
    double final_level = 0.0;
    double sse = 0.0;
};

Pass ses_pass(const std::vector<double>& y, double alpha) {
    Pass out;
    out.fitted.resize(y.size());
    double level = y[0];
    out.fitted[0] = level;
    for (std::size_t t = 1; t < y.size(); ++t) {
        level = alpha * y[t - 1] + (1.0 - alpha) * level;
        out.fitted[t] = level;
        const double e = y[t] - level;
        out.sse += e * e;
    }
    out.final_level = alpha * y.back() + (1.0 - alpha) * level;
    return out;
}

} // namespace

std::pair<SesFit, Forecast> ses_forecast(const core::Series& s, std::optional<double> alpha,
                                         int horizon, const preprocess::TransformChain& chain) {
    if (s.has_missing()) throw ConstraintViolation("ses_forecast requires a missing-free series");
    if (horizon < 0) throw ConfigError("horizon must be >= 0");
    if (alpha && (*alpha <= 0.0 || *alpha >= 1.0)) {
        throw AlphaOutOfRange("alpha must lie strictly inside (0,1)");
    }

    const auto& y = s.values();
    SesFit fit;
    if (alpha) {
        fit.alpha = *alpha;
    } else {
        fit.alpha = numeric::golden_section(
            [&](double a) { return ses_pass(y, a).sse; }, 1e-6, 1.0 - 1e-6, 1e-8);
        fit.alpha_estimated = true;
    }
    Pass pass = ses_pass(y, fit.alpha);
    fit.fitted = std::move(pass.fitted);
    fit.final_level = pass.final_level;
    fit.sse = pass.sse;

    Forecast fc;
    fc.origin = s.end_date();
    fc.horizon = horizon;
    fc.model = "SES";
    fc.values_transformed.assign(static_cast<std::size_t>(horizon), fit.final_level);
    fc.values = fc.values_transformed;
    if (chain.log_applied) {
        for (double& v : fc.values) v = std::expm1(v);
    }
    return {fit, fc};
}

std::vector<double> ses_one_step(const SesFit& fit, const core::Series& full, std::size_t start) {
    const auto& y = full.values();
    if (start < 1 || start > y.size()) throw ConfigError("ses_one_step: bad start");
    double level = y[0];
    for (std::size_t t = 1; t < start; ++t) {
        level = fit.alpha * y[t - 1] + (1.0 - fit.alpha) * level;
    }
    std::vector<double> preds;
    preds.reserve(y.size() - start);
    for (std::size_t t = start; t < y.size(); ++t) {
        level = fit.alpha * y[t - 1] + (1.0 - fit.alpha) * level;
        preds.push_back(level);
    }
    return preds;
}

} // namespace gridcast::models
