#pragma once

#include "gridcast/core/dataset.hpp"
#include "gridcast/core/series.hpp"
#include "gridcast/models/forecast.hpp"
#include "gridcast/preprocess/transforms.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gridcast::models {

/// Non-seasonal (p, d, q) and seasonal (P, D, Q)_s orders.
struct ArimaOrder {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int s = 1;

    int n_coef() const { return p + q + P + Q; }
    int conditioning_lags() const { return p + P * s; }
    std::string to_string() const;
    void validate() const; // s = 1 forces P = D = Q = 0
};

struct ArimaConfig {
    /// Intercept on the differenced scale. Defaults to "only when no
    /// differencing is applied" (d + D == 0), so integrated fits produce
    /// drift-free forecasts.
    std::optional<bool> with_intercept;
    /// When true, a fit whose optimum lies inside the invertibility /
    /// stationarity region boundary (root modulus <= 1.001) is rejected
    /// with NonInvertible instead of merely penalized.
    bool enforce_invertibility = false;
    /// Log flag of the preprocessing already applied to the input series;
    /// carried into the fit's transform chain.
    bool log_applied = false;
    int max_iterations = 500;
    double rel_tol = 1e-9;
};

/**
 * A conditional-sum-of-squares ARIMA/SARIMA/ARIMAX fit: estimated
 * coefficients, residual diagnostics, information criteria and the state
 * needed for recursive forecasting.
 */
struct ArimaFit {
    ArimaOrder order;
    std::vector<double> ar, ma;        // phi_1..phi_p, theta_1..theta_q
    std::vector<double> sar, sma;      // Phi_1..Phi_P, Theta_1..Theta_Q
    bool has_intercept = false;
    double intercept = 0.0;
    std::vector<std::string> exog_names;
    std::vector<double> exog_coef;

    double sigma2 = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    int k_params = 0;
    int n_eff = 0;
    bool converged = true;

    // Smallest root modulus of each lag polynomial (inf when absent).
    double min_ar_root = std::numeric_limits<double>::infinity();
    double min_ma_root = std::numeric_limits<double>::infinity();
    double min_sar_root = std::numeric_limits<double>::infinity();
    double min_sma_root = std::numeric_limits<double>::infinity();

    std::vector<double> residuals; // length n_eff

    preprocess::TransformChain chain; // log flag + differencing record
    core::Date origin;                // last training date
    std::string series_name;
    std::string unit;

    // Forecasting state.
    std::vector<double> u_history;    // differenced, intercept/exog-adjusted
    std::vector<double> eps_history;  // aligned residuals (0 over conditioning span)
    std::vector<std::vector<double>> exog_tail; // last d + D*s raw exog rows, per column

    double criterion(bool use_bic) const { return use_bic ? bic : aic; }
    double sse() const { return sigma2 * n_eff; }
};

/**
 * Estimates the model by conditional sum of squares: residuals are
 * computed recursively on the differenced, exog-adjusted series with
 * pre-sample residuals set to zero, and the coefficient vector minimizes
 * the SSE via Nelder-Mead refined by BFGS with numerical gradients.
 */
ArimaFit fit_arima(const core::Series& s, const ArimaOrder& order,
                   const core::ExogMatrix* exog = nullptr, const ArimaConfig& cfg = {});

/// Recursive h-step forecast; future shocks take their zero mean, the
/// differencing and log steps are inverted back to original units.
Forecast forecast_arima(const ArimaFit& fit, int horizon,
                        const core::ExogMatrix* future_exog = nullptr);

/**
 * One-step-ahead predictions on the transformed scale for positions
 * [start, full.size()) of a series that extends the training data, using
 * the fitted coefficients without re-estimation.
 */
std::vector<double> arima_one_step(const ArimaFit& fit, const core::Series& full_transformed,
                                   const core::ExogMatrix* full_exog, std::size_t start);

/// aic = -2L + 2k, bic = -2L + k ln(n_eff).
std::pair<double, double> information_criteria(double loglik, int k_params, int n_eff);

} // namespace gridcast::models
