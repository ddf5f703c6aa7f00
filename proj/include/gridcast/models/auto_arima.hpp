#pragma once

#include "gridcast/models/arima.hpp"

#include <string>
#include <vector>

namespace gridcast::models {

enum class Criterion { Aic, Bic };

struct AutoArimaBounds {
    int max_p = 3;
    int max_q = 3;
    int max_P = 0;
    int max_Q = 0;
    int max_d = 2;
    int max_D = 0;
    int s = 1;
};

/// One grid candidate as evaluated (or skipped) by the search.
struct AutoArimaCandidate {
    ArimaOrder order;
    double criterion = 0.0; // selection criterion, see selection_criterion()
    int k_params = 0;
    bool ok = false;
    std::string error;
};

struct AutoArimaResult {
    ArimaFit fit;
    int chosen_d = 0;
    Criterion criterion = Criterion::Aic;
    double selection_value = 0.0; // the winner's selection criterion
    std::vector<AutoArimaCandidate> trace;
};

/**
 * Criterion used to rank candidates: n * ln(sigma2) + penalty * k with a
 * penalty of 2 (AIC) or ln(n) (BIC) and n the undifferenced series
 * length. Using one common n for every candidate removes the bias a raw
 * CSS log-likelihood picks up from order-dependent conditioning spans
 * (models with more AR lags condition away more observations).
 */
double selection_criterion(const ArimaFit& fit, Criterion criterion, std::size_t n_series);

/**
 * Order search per the classical recipe: d is fixed first by repeated
 * ADF tests (difference until the stationary verdict or max_d), then the
 * remaining orders are searched exhaustively. Candidates that fail to
 * fit are skipped and logged. Ties break toward fewer parameters, then
 * the lexicographically smaller (p, q, P, Q, D).
 *
 * Candidates evaluate concurrently; the reduction is deterministic.
 */
AutoArimaResult auto_arima(const core::Series& s, const AutoArimaBounds& bounds,
                           Criterion criterion = Criterion::Aic,
                           const core::ExogMatrix* exog = nullptr,
                           const ArimaConfig& base_cfg = {});

} // namespace gridcast::models
