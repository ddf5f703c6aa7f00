#pragma once

#include "gridcast/core/series.hpp"

#include <vector>

namespace gridcast::diagnostics {

/// One lag of a correlogram: the (partial) autocorrelation value and the
/// +-1.96/sqrt(T) significance band.
struct CorrelogramPoint {
    int lag = 0;
    double value = 0.0;
    double band = 0.0;
};

/**
 * Sample autocorrelation: rho(k) uses the whole-series mean and the
 * full-sample denominator sum (Y_t - Ybar)^2. rho(0) = 1 is included.
 */
std::vector<CorrelogramPoint> acf(const core::Series& s, int max_lag);
std::vector<double> acf_values(const std::vector<double>& values, int max_lag);

/**
 * Partial autocorrelation alpha(k): the coefficient of Y_{t-k} in the
 * k-lag autoregression, computed from the sample autocorrelations by the
 * Durbin-Levinson recursion. Every lag is cross-checked against a direct
 * dense solve of the same normal equations; disagreement beyond 1e-6
 * raises SingularRegression, as does a numerically singular system.
 *
 * alpha(1) equals rho(1) exactly.
 */
std::vector<CorrelogramPoint> pacf(const core::Series& s, int max_lag);
std::vector<double> pacf_values(const std::vector<double>& values, int max_lag);

/// The dense-solve route on its own: solves the k-lag Yule-Walker system
/// for each k and returns the last coefficient. Used as the internal
/// cross-check and exposed for tests.
std::vector<double> pacf_toeplitz_solve(const std::vector<double>& autocorr, int max_lag);

} // namespace gridcast::diagnostics
