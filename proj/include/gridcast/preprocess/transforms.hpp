#pragma once

#include "gridcast/core/series.hpp"

#include <optional>
#include <vector>

namespace gridcast::preprocess {

/**
 * Series after (1 - B^s)^D followed by (1 - B)^d, together with the
 * d + D*s pre-differencing values needed to undo the operator.
 *
 * `head` holds, in chronological order, the values immediately preceding
 * the first differenced value on the undifferenced scale.
 */
struct DifferencedSeries {
    std::vector<double> values;
    std::vector<double> head;
    int d = 0;
    int D = 0;
    int s = 1;
};

/**
 * Record of the reversible preprocessing applied to a series before model
 * fitting: the log flag and the differencing orders with the tail values
 * consumed by differencing. Inverting maps forecasts back to original
 * units.
 */
struct TransformChain {
    bool log_applied = false;
    int d = 0;
    int D = 0;
    int s = 1;
    std::vector<double> tail; // last d + D*s values on the pre-differencing scale

    bool has_difference() const { return d > 0 || D > 0; }
};

/// Replaces interior missing values by linear interpolation and
/// leading/trailing missing values by nearest-value extension.
core::Series interpolate_missing(const core::Series& s);

/**
 * Savitzky-Golay smoothing: each value becomes the center evaluation of
 * the least-squares polynomial of degree polyorder over its window.
 * Boundary points use the same-degree fit on the truncated asymmetric
 * window rather than padded data.
 */
core::Series savgol_smooth(const core::Series& s, int window, int polyorder);

/// Variance stabilization y -> ln(1 + y). Requires every value > -1.
core::Series log_transform(const core::Series& s);
core::Series log_transform(const core::Series& s, TransformChain& chain);

/// Exact inverse y -> exp(y) - 1. The chain overload requires a recorded
/// log step and throws NoLogStep otherwise.
core::Series invert_log(const core::Series& s);
core::Series invert_log(const core::Series& s, const TransformChain& chain);

/// Applies (1 - B^s)^D then (1 - B)^d. Requires a missing-free series
/// longer than d + D*s.
DifferencedSeries difference(const core::Series& s, int d, int D, int s_period);
DifferencedSeries difference(const std::vector<double>& values, int d, int D, int s_period);

/**
 * Integrates values on the differenced scale back to the undifferenced
 * scale, continuing right after ds.head. Feeding the differenced values
 * themselves reproduces the original series after its head exactly.
 */
std::vector<double> invert_difference(const DifferencedSeries& ds,
                                      const std::vector<double>& future_diffs);

/// Inversion state seeded from the last d + D*s values of a series, for
/// integrating out-of-sample forecasts.
DifferencedSeries continuation_state(const std::vector<double>& values, int d, int D,
                                     int s_period);

/// Expanded coefficients of (1-B)^d (1-B^s)^D as a polynomial in B
/// (index = lag, coefficient of B^0 is 1).
std::vector<double> differencing_polynomial(int d, int D, int s_period);

} // namespace gridcast::preprocess
