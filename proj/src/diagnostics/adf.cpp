#include "gridcast/diagnostics/adf.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/numeric/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace gridcast::diagnostics {

namespace {

// Dickey-Fuller distribution percentiles (Fuller 1976), one surface per
// regression spec, tabulated at T = 25, 50, 100, 250, 500, infinity for
// cumulative probabilities 1, 2.5, 5, 10, 90, 95, 97.5 and 99 percent.
constexpr std::array<double, 8> kProbs = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<double, 6> kTableT = {25, 50, 100, 250, 500,
                                           std::numeric_limits<double>::infinity()};

using Surface = std::array<std::array<double, 8>, 6>;

constexpr Surface kTableNone = {{
    {-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16},
    {-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08},
    {-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
}};

constexpr Surface kTableConstant = {{
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
}};

constexpr Surface kTableConstantTrend = {{
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
}};

const Surface& surface_for(AdfSpec spec) {
    switch (spec) {
        case AdfSpec::None: return kTableNone;
        case AdfSpec::Constant: return kTableConstant;
        case AdfSpec::ConstantTrend: return kTableConstantTrend;
    }
    throw ConfigError("unknown ADF spec");
}

// Critical values for the 8 tabulated probabilities at sample size n,
// interpolated linearly in 1/T between bracketing table rows.
std::array<double, 8> critical_row(AdfSpec spec, int n) {
    const Surface& table = surface_for(spec);
    const double t = static_cast<double>(std::max(n, 25));
    std::size_t hi = 1;
    while (hi < kTableT.size() - 1 && t > kTableT[hi]) ++hi;
    const std::size_t lo = hi - 1;
    const double inv_lo = 1.0 / kTableT[lo];
    const double inv_hi = std::isinf(kTableT[hi]) ? 0.0 : 1.0 / kTableT[hi];
    const double inv_t = 1.0 / t;
    double w = (inv_lo == inv_hi) ? 0.0 : (inv_t - inv_lo) / (inv_hi - inv_lo);
    w = std::clamp(w, 0.0, 1.0);

    std::array<double, 8> row{};
    for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] = table[lo][j] + w * (table[hi][j] - table[lo][j]);
    }
    return row;
}

// Log-linear interpolation of the cumulative probability at the observed
// statistic; clamped to [0.001, 0.999] outside the tabulated range.
double interpolate_p(const std::array<double, 8>& crit, double stat) {
    constexpr double kPMin = 0.001, kPMax = 0.999;
    std::size_t seg = 0;
    if (stat <= crit.front()) {
        seg = 0;
    } else if (stat >= crit.back()) {
        seg = crit.size() - 2;
    } else {
        while (seg + 2 < crit.size() && stat > crit[seg + 1]) ++seg;
    }
    const double c0 = crit[seg], c1 = crit[seg + 1];
    const double lp0 = std::log(kProbs[seg]), lp1 = std::log(kProbs[seg + 1]);
    double lp = (c1 == c0) ? lp0 : lp0 + (lp1 - lp0) * (stat - c0) / (c1 - c0);
    return std::clamp(std::exp(lp), kPMin, kPMax);
}

struct Regression {
    double stat = 0.0;
    double sse = 0.0;
    std::size_t nobs = 0;
    std::size_t k = 0;
};

// ADF regression with `lag` lagged differences, using observations from
// t = start_t (so candidate lags can share one sample).
Regression adf_regression(const std::vector<double>& y, AdfSpec spec, int lag, int start_t) {
    const std::size_t n = y.size();
    const std::size_t first = static_cast<std::size_t>(start_t);
    const std::size_t nobs = n - first;
    const std::size_t k_det = (spec == AdfSpec::None) ? 0 : (spec == AdfSpec::Constant ? 1 : 2);
    const std::size_t k = k_det + 1 + static_cast<std::size_t>(lag);
    if (nobs <= k) throw TooShort("ADF regression has too few observations");

    std::vector<double> design(nobs * k);
    std::vector<double> target(nobs);
    for (std::size_t i = 0; i < nobs; ++i) {
        const std::size_t t = first + i;
        target[i] = y[t] - y[t - 1];
        std::size_t c = 0;
        if (spec != AdfSpec::None) design[i * k + c++] = 1.0;
        if (spec == AdfSpec::ConstantTrend) design[i * k + c++] = static_cast<double>(i + 1);
        design[i * k + c++] = y[t - 1];
        for (int j = 1; j <= lag; ++j) {
            design[i * k + c++] = y[t - static_cast<std::size_t>(j)] -
                                  y[t - static_cast<std::size_t>(j) - 1];
        }
    }

    auto fit = numeric::ols(design, nobs, k, target, /*with_stderr=*/true);
    Regression out;
    const std::size_t gamma_idx = k_det;
    out.stat = (fit.stderr_coef[gamma_idx] > 0.0)
                   ? fit.coef[gamma_idx] / fit.stderr_coef[gamma_idx]
                   : 0.0;
    out.sse = fit.sse;
    out.nobs = nobs;
    out.k = k;
    return out;
}

} // namespace

int schwert_max_lag(std::size_t n) {
    return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

AdfResult adf_test(const std::vector<double>& values, AdfSpec spec, std::optional<int> max_lag) {
    const std::size_t n = values.size();
    for (double v : values) {
        if (core::is_missing(v)) throw ConstraintViolation("adf_test requires missing-free values");
    }

    int maxlag = max_lag.value_or(schwert_max_lag(n));
    maxlag = std::max(0, maxlag);
    if (n < static_cast<std::size_t>(20 + maxlag)) {
        throw TooShort("adf_test needs length >= 20 + max_lag");
    }

    int used_lag = maxlag;
    if (!max_lag.has_value()) {
        // Candidates share the sample implied by the largest lag; ties in
        // AIC resolve to the smaller lag order.
        double best_aic = std::numeric_limits<double>::infinity();
        used_lag = 0;
        for (int lag = 0; lag <= maxlag; ++lag) {
            auto reg = adf_regression(values, spec, lag, maxlag + 1);
            const double nobs = static_cast<double>(reg.nobs);
            const double aic =
                nobs * std::log(reg.sse / nobs) + 2.0 * static_cast<double>(reg.k);
            if (aic < best_aic - 1e-12) {
                best_aic = aic;
                used_lag = lag;
            }
        }
    }

    auto reg = adf_regression(values, spec, used_lag, used_lag + 1);

    AdfResult out;
    out.statistic = reg.stat;
    out.used_lag = used_lag;
    out.spec = spec;
    out.n_obs = static_cast<int>(reg.nobs);
    const auto crit = critical_row(spec, out.n_obs);
    out.crit_1pct = crit[0];
    out.crit_5pct = crit[2];
    out.crit_10pct = crit[3];
    out.p_value = interpolate_p(crit, reg.stat);
    out.stationary = out.p_value < 0.05;
    return out;
}

AdfResult adf_test(const core::Series& s, AdfSpec spec, std::optional<int> max_lag) {
    return adf_test(s.values(), spec, max_lag);
}

const char* adf_spec_name(AdfSpec spec) {
    switch (spec) {
        case AdfSpec::None: return "none";
        case AdfSpec::Constant: return "constant";
        case AdfSpec::ConstantTrend: return "constant_trend";
    }
    return "unknown";
}

AdfSpec adf_spec_from_name(const std::string& name) {
    if (name == "none" || name == "n") return AdfSpec::None;
    if (name == "constant" || name == "c") return AdfSpec::Constant;
    if (name == "constant_trend" || name == "ct") return AdfSpec::ConstantTrend;
    throw ConfigError("unknown ADF spec '" + name + "' (use none|constant|constant_trend)");
}

} // namespace gridcast::diagnostics
