#include "gridcast/models/auto_arima.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/diagnostics/adf.hpp"
#include "gridcast/numeric/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace gridcast::models {

namespace {

// Difference until the ADF verdict turns stationary or the cap is hit.
int select_d(const std::vector<double>& values, int max_d) {
    std::vector<double> work = values;
    for (int d = 0; d <= max_d; ++d) {
        try {
            auto res = diagnostics::adf_test(work, diagnostics::AdfSpec::Constant);
            if (res.stationary) return d;
        } catch (const TooShort&) {
            return d; // cannot test any further; stop differencing
        }
        if (d == max_d) break;
        std::vector<double> next(work.size() - 1);
        for (std::size_t t = 0; t + 1 < work.size(); ++t) next[t] = work[t + 1] - work[t];
        work = std::move(next);
    }
    return max_d;
}

} // namespace

double selection_criterion(const ArimaFit& fit, Criterion criterion, std::size_t n_series) {
    const double n = static_cast<double>(n_series);
    const double penalty = (criterion == Criterion::Bic) ? std::log(n) : 2.0;
    return n * std::log(fit.sigma2) + penalty * static_cast<double>(fit.k_params);
}

AutoArimaResult auto_arima(const core::Series& s, const AutoArimaBounds& bounds,
                           Criterion criterion, const core::ExogMatrix* exog,
                           const ArimaConfig& base_cfg) {
    if (bounds.max_p < 0 || bounds.max_q < 0 || bounds.max_P < 0 || bounds.max_Q < 0 ||
        bounds.max_d < 0 || bounds.max_D < 0 || bounds.s < 1) {
        throw BadConfig("auto_arima bounds must be non-negative");
    }
    if (s.has_missing()) throw ConstraintViolation("auto_arima requires a missing-free series");

    const int d = select_d(s.values(), bounds.max_d);
    const bool seasonal = bounds.s > 1;
    const int max_P = seasonal ? bounds.max_P : 0;
    const int max_Q = seasonal ? bounds.max_Q : 0;
    const int max_D = seasonal ? bounds.max_D : 0;

    std::vector<ArimaOrder> candidates;
    for (int D = 0; D <= max_D; ++D) {
        for (int p = 0; p <= bounds.max_p; ++p) {
            for (int q = 0; q <= bounds.max_q; ++q) {
                for (int P = 0; P <= max_P; ++P) {
                    for (int Q = 0; Q <= max_Q; ++Q) {
                        ArimaOrder order;
                        order.p = p;
                        order.d = d;
                        order.q = q;
                        order.P = P;
                        order.D = D;
                        order.Q = Q;
                        order.s = bounds.s;
                        candidates.push_back(order);
                    }
                }
            }
        }
    }
    if (candidates.empty()) throw BadConfig("auto_arima: empty candidate grid");

    struct Outcome {
        AutoArimaCandidate entry;
        std::optional<ArimaFit> fit;
    };
    auto outcomes = numeric::parallel_map<Outcome>(candidates.size(), [&](std::size_t i) {
        Outcome out;
        out.entry.order = candidates[i];
        try {
            ArimaFit fit = fit_arima(s, candidates[i], exog, base_cfg);
            out.entry.criterion = selection_criterion(fit, criterion, s.size());
            out.entry.k_params = fit.k_params;
            out.entry.ok = true;
            out.fit = std::move(fit);
        } catch (const Error& e) {
            out.entry.error = e.what();
        }
        return out;
    });

    // Deterministic reduction: criterion, then fewer parameters, then the
    // lexicographically smaller order.
    std::optional<std::size_t> best;
    auto key = [&](const Outcome& o) {
        const auto& e = o.entry;
        return std::make_tuple(e.criterion, e.k_params, e.order.p, e.order.q, e.order.P,
                               e.order.Q, e.order.D);
    };
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].entry.ok) continue;
        if (!best || key(outcomes[i]) < key(outcomes[*best])) best = i;
    }
    if (!best) throw NoValidModel("every auto_arima candidate failed to fit");

    AutoArimaResult result;
    result.fit = std::move(*outcomes[*best].fit);
    result.chosen_d = d;
    result.criterion = criterion;
    result.selection_value = outcomes[*best].entry.criterion;
    result.trace.reserve(outcomes.size());
    for (auto& o : outcomes) result.trace.push_back(std::move(o.entry));
    return result;
}

} // namespace gridcast::models
