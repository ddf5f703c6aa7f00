#include "gridcast/models/arima.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/numeric/linalg.hpp"
#include "gridcast/numeric/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace gridcast::models {

namespace {

// Lag-polynomial coefficients (index = lag, entry 0 = 1) for the expanded
// AR side phi(B)Phi(B^s) and MA side theta(B)Theta(B^s).
std::vector<double> expand_poly(const std::vector<double>& nonseasonal,
                                const std::vector<double>& seasonal, int s, double sign) {
    std::vector<double> a(nonseasonal.size() + 1, 0.0);
    a[0] = 1.0;
    for (std::size_t i = 0; i < nonseasonal.size(); ++i) a[i + 1] = sign * nonseasonal[i];
    std::vector<double> b(seasonal.size() * static_cast<std::size_t>(s) + 1, 0.0);
    b[0] = 1.0;
    for (std::size_t j = 0; j < seasonal.size(); ++j) {
        b[(j + 1) * static_cast<std::size_t>(s)] = sign * seasonal[j];
    }
    return numeric::poly_multiply(a, b);
}

struct Coefficients {
    std::vector<double> ar, ma, sar, sma;
    double intercept = 0.0;
    std::vector<double> exog;
};

struct ParamLayout {
    ArimaOrder order;
    bool with_intercept = false;
    std::size_t n_exog = 0;

    std::size_t size() const {
        return static_cast<std::size_t>(order.n_coef()) + (with_intercept ? 1 : 0) + n_exog;
    }

    Coefficients unpack(const std::vector<double>& x) const {
        Coefficients c;
        std::size_t i = 0;
        c.ar.assign(x.begin() + i, x.begin() + i + order.p);
        i += static_cast<std::size_t>(order.p);
        c.ma.assign(x.begin() + i, x.begin() + i + order.q);
        i += static_cast<std::size_t>(order.q);
        c.sar.assign(x.begin() + i, x.begin() + i + order.P);
        i += static_cast<std::size_t>(order.P);
        c.sma.assign(x.begin() + i, x.begin() + i + order.Q);
        i += static_cast<std::size_t>(order.Q);
        if (with_intercept) c.intercept = x[i++];
        c.exog.assign(x.begin() + i, x.end());
        return c;
    }
};

// CSS residuals: eps_t = u_t + sum pi_i u_{t-i} - sum psi_j eps_{t-j},
// starting after the conditioning span with pre-sample residuals at zero.
std::vector<double> css_residuals(const std::vector<double>& u, const std::vector<double>& pi,
                                  const std::vector<double>& psi, std::size_t cond) {
    const std::size_t n = u.size();
    std::vector<double> eps(n, 0.0);
    for (std::size_t t = cond; t < n; ++t) {
        double e = u[t];
        for (std::size_t i = 1; i < pi.size(); ++i) {
            e += pi[i] * u[t - i]; // t >= cond >= pi.size()-1 guarantees the index
        }
        for (std::size_t j = 1; j < psi.size() && j <= t; ++j) {
            e -= psi[j] * eps[t - j];
        }
        eps[t] = e;
    }
    return eps;
}

std::vector<double> adjusted_series(const std::vector<double>& z, const Coefficients& c,
                                    const std::vector<std::vector<double>>& exog_diff) {
    std::vector<double> u(z.size());
    for (std::size_t t = 0; t < z.size(); ++t) {
        double v = z[t] - c.intercept;
        for (std::size_t j = 0; j < exog_diff.size(); ++j) v -= c.exog[j] * exog_diff[j][t];
        u[t] = v;
    }
    return u;
}

double root_penalty(const std::vector<double>& coeffs, int sign, double* min_root) {
    const double m = numeric::min_root_modulus(coeffs, sign);
    if (min_root) *min_root = m;
    constexpr double kBoundary = 1.001;
    return (m <= kBoundary) ? 1e6 * (kBoundary - m) : 0.0;
}

} // namespace

std::string ArimaOrder::to_string() const {
    std::ostringstream os;
    os << "(" << p << "," << d << "," << q << ")";
    if (s > 1) os << "(" << P << "," << D << "," << Q << ")[" << s << "]";
    return os.str();
}

void ArimaOrder::validate() const {
    if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0 || s < 1) {
        throw BadOrder("ARIMA orders must be non-negative and s >= 1");
    }
    if (s == 1 && (P > 0 || D > 0 || Q > 0)) {
        throw BadOrder("seasonal terms require a season length s > 1");
    }
}

std::pair<double, double> information_criteria(double loglik, int k_params, int n_eff) {
    if (n_eff < 1) throw TooShort("information criteria need n_eff >= 1");
    const double aic = -2.0 * loglik + 2.0 * static_cast<double>(k_params);
    const double bic = -2.0 * loglik +
                       static_cast<double>(k_params) * std::log(static_cast<double>(n_eff));
    return {aic, bic};
}

ArimaFit fit_arima(const core::Series& s, const ArimaOrder& order, const core::ExogMatrix* exog,
                   const ArimaConfig& cfg) {
    order.validate();
    if (s.has_missing()) throw ConstraintViolation("fit_arima requires a missing-free series");
    if (exog) {
        if (exog->rows() != s.size()) {
            throw ConstraintViolation("exog rows must match the series length");
        }
        if (exog->has_missing()) throw ConstraintViolation("exog must be missing-free");
    }

    ParamLayout layout;
    layout.order = order;
    layout.with_intercept = cfg.with_intercept.value_or(order.d + order.D == 0);
    layout.n_exog = exog ? exog->cols() : 0;

    const int k_params = order.n_coef() + static_cast<int>(layout.n_exog) +
                         (layout.with_intercept ? 1 : 0) + 1; // + sigma^2

    // Difference the target and every exog column identically.
    auto diffed = preprocess::difference(s.values(), order.d, order.D, order.s);
    const std::vector<double>& z = diffed.values;
    std::vector<std::vector<double>> exog_diff;
    for (std::size_t j = 0; j < layout.n_exog; ++j) {
        exog_diff.push_back(
            preprocess::difference(exog->column(j), order.d, order.D, order.s).values);
    }

    const std::size_t cond = static_cast<std::size_t>(order.conditioning_lags());
    if (z.size() <= cond) throw TooShort("series too short after differencing");
    const int n_eff = static_cast<int>(z.size() - cond);
    if (n_eff < 10 * k_params) {
        throw TooShort("need n_eff >= 10 * k_params (" + std::to_string(n_eff) + " < " +
                       std::to_string(10 * k_params) + ") for order " + order.to_string());
    }

    // Collinear regressors are rejected up front.
    std::vector<double> start(layout.size(), 0.0);
    {
        std::size_t i = 0;
        for (int j = 0; j < order.n_coef(); ++j) start[i++] = 0.1;
        if (layout.with_intercept || layout.n_exog > 0) {
            const std::size_t cols = layout.n_exog + 1; // constant column always present
            std::vector<double> design(z.size() * cols);
            for (std::size_t t = 0; t < z.size(); ++t) {
                design[t * cols] = 1.0;
                for (std::size_t j = 0; j < layout.n_exog; ++j) {
                    design[t * cols + 1 + j] = exog_diff[j][t];
                }
            }
            if (numeric::matrix_rank(design, z.size(), cols) < cols) {
                throw SingularExog("exogenous regressors are collinear");
            }
            auto beta = numeric::ols_coef(design, z.size(), cols, z);
            if (layout.with_intercept) start[i++] = beta[0];
            for (std::size_t j = 0; j < layout.n_exog; ++j) start[i++] = beta[1 + j];
        }
    }

    auto objective = [&](const std::vector<double>& x) {
        Coefficients c = layout.unpack(x);
        double penalty = 0.0;
        penalty += root_penalty(c.ar, -1, nullptr);
        penalty += root_penalty(c.ma, +1, nullptr);
        penalty += root_penalty(c.sar, -1, nullptr);
        penalty += root_penalty(c.sma, +1, nullptr);
        const auto u = adjusted_series(z, c, exog_diff);
        const auto pi = expand_poly(c.ar, c.sar, order.s, -1.0);
        const auto psi = expand_poly(c.ma, c.sma, order.s, +1.0);
        const auto eps = css_residuals(u, pi, psi, cond);
        double sse = 0.0;
        for (std::size_t t = cond; t < eps.size(); ++t) sse += eps[t] * eps[t];
        return sse + penalty;
    };

    std::vector<double> best = start;
    bool converged = true;
    if (!start.empty()) {
        const int nm_budget = std::max(50, cfg.max_iterations * 3 / 5);
        auto nm = numeric::nelder_mead(objective, start, 0.1, cfg.rel_tol, nm_budget);
        auto qn = numeric::bfgs(objective, nm.x, 1e-5, cfg.rel_tol,
                                std::max(10, cfg.max_iterations - nm.iterations));
        best = qn.value <= nm.value ? qn.x : nm.x;
        converged = qn.converged || nm.converged;
    }

    Coefficients c = layout.unpack(best);
    ArimaFit fit;
    fit.order = order;
    fit.ar = c.ar;
    fit.ma = c.ma;
    fit.sar = c.sar;
    fit.sma = c.sma;
    fit.has_intercept = layout.with_intercept;
    fit.intercept = c.intercept;
    fit.exog_coef = c.exog;
    if (exog) fit.exog_names = exog->names();
    fit.converged = converged;

    root_penalty(c.ar, -1, &fit.min_ar_root);
    root_penalty(c.ma, +1, &fit.min_ma_root);
    root_penalty(c.sar, -1, &fit.min_sar_root);
    root_penalty(c.sma, +1, &fit.min_sma_root);
    if (cfg.enforce_invertibility) {
        const double worst = std::min(std::min(fit.min_ar_root, fit.min_ma_root),
                                      std::min(fit.min_sar_root, fit.min_sma_root));
        if (worst <= 1.001) {
            throw NonInvertible("optimum has a lag-polynomial root at modulus " +
                                std::to_string(worst));
        }
    }

    const auto u = adjusted_series(z, c, exog_diff);
    const auto pi = expand_poly(c.ar, c.sar, order.s, -1.0);
    const auto psi = expand_poly(c.ma, c.sma, order.s, +1.0);
    const auto eps = css_residuals(u, pi, psi, cond);
    double sse = 0.0;
    for (std::size_t t = cond; t < eps.size(); ++t) sse += eps[t] * eps[t];

    fit.n_eff = n_eff;
    fit.k_params = k_params;
    fit.residuals.assign(eps.begin() + static_cast<std::ptrdiff_t>(cond), eps.end());
    fit.sigma2 = sse / static_cast<double>(n_eff);
    fit.loglik = -0.5 * static_cast<double>(n_eff) *
                 (std::log(2.0 * std::numbers::pi) + std::log(sse / n_eff) + 1.0);
    std::tie(fit.aic, fit.bic) = information_criteria(fit.loglik, k_params, n_eff);

    fit.chain.log_applied = cfg.log_applied;
    fit.chain.d = order.d;
    fit.chain.D = order.D;
    fit.chain.s = order.s;
    const std::size_t consumed = static_cast<std::size_t>(order.d) +
                                 static_cast<std::size_t>(order.D) *
                                     static_cast<std::size_t>(order.s);
    fit.chain.tail.assign(s.values().end() - static_cast<std::ptrdiff_t>(consumed),
                          s.values().end());
    fit.origin = s.end_date();
    fit.series_name = s.name();
    fit.unit = s.unit();
    fit.u_history = u;
    fit.eps_history = eps;
    if (exog) {
        for (std::size_t j = 0; j < exog->cols(); ++j) {
            const auto& col = exog->column(j);
            fit.exog_tail.emplace_back(col.end() - static_cast<std::ptrdiff_t>(consumed),
                                       col.end());
        }
    }
    return fit;
}

Forecast forecast_arima(const ArimaFit& fit, int horizon, const core::ExogMatrix* future_exog) {
    if (horizon < 1) throw ConfigError("forecast horizon must be >= 1");
    const bool wants_exog = !fit.exog_coef.empty();
    if (wants_exog) {
        if (!future_exog || future_exog->rows() != static_cast<std::size_t>(horizon) ||
            future_exog->cols() != fit.exog_coef.size()) {
            throw MissingFutureExog("fit uses exogenous regressors; provide " +
                                    std::to_string(horizon) + " future rows");
        }
    } else if (future_exog && future_exog->rows() != 0) {
        throw MissingFutureExog("fit has no exogenous regressors; future_exog must be absent");
    }

    // Future exog on the differenced scale: extend each raw column with its
    // tail and difference the concatenation.
    std::vector<std::vector<double>> exog_future_diff;
    if (wants_exog) {
        for (std::size_t j = 0; j < fit.exog_coef.size(); ++j) {
            std::vector<double> ext = fit.exog_tail[j];
            const auto& col = future_exog->column(j);
            ext.insert(ext.end(), col.begin(), col.end());
            if (fit.order.d + fit.order.D == 0) {
                exog_future_diff.push_back(col);
            } else {
                auto diffed = preprocess::difference(ext, fit.order.d, fit.order.D, fit.order.s);
                exog_future_diff.push_back(std::move(diffed.values));
            }
        }
    }

    const auto pi = expand_poly(fit.ar, fit.sar, fit.order.s, -1.0);
    const auto psi = expand_poly(fit.ma, fit.sma, fit.order.s, +1.0);

    std::vector<double> u = fit.u_history;
    const std::vector<double>& eps = fit.eps_history;
    const std::size_t n_hist = u.size();

    std::vector<double> z_hat(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        const std::size_t t = n_hist + static_cast<std::size_t>(h);
        double val = 0.0;
        for (std::size_t i = 1; i < pi.size(); ++i) {
            if (t < i) break;
            val -= pi[i] * u[t - i];
        }
        for (std::size_t j = 1; j < psi.size(); ++j) {
            if (t < j || t - j >= n_hist) continue; // future shocks take their zero mean
            val += psi[j] * eps[t - j];
        }
        u.push_back(val);
        double z = val + fit.intercept;
        for (std::size_t j = 0; j < exog_future_diff.size(); ++j) {
            z += fit.exog_coef[j] * exog_future_diff[j][static_cast<std::size_t>(h)];
        }
        z_hat[static_cast<std::size_t>(h)] = z;
    }

    // Integrate back to the transformed scale, then undo the log step.
    preprocess::DifferencedSeries state;
    state.d = fit.order.d;
    state.D = fit.order.D;
    state.s = fit.order.s;
    state.head = fit.chain.tail;
    std::vector<double> level = preprocess::invert_difference(state, z_hat);

    Forecast out;
    out.origin = fit.origin;
    out.horizon = horizon;
    out.values_transformed = level;
    out.model = "ARIMA" + fit.order.to_string();
    if (fit.chain.log_applied) {
        for (double& v : level) v = std::expm1(v);
    }
    out.values = std::move(level);
    return out;
}

std::vector<double> arima_one_step(const ArimaFit& fit, const core::Series& full_transformed,
                                   const core::ExogMatrix* full_exog, std::size_t start) {
    const auto& y = full_transformed.values();
    if (start >= y.size()) throw ConfigError("one-step start beyond series end");
    const bool wants_exog = !fit.exog_coef.empty();
    if (wants_exog && (!full_exog || full_exog->rows() != y.size())) {
        throw MissingFutureExog("fit uses exogenous regressors; provide aligned rows");
    }

    auto diffed = preprocess::difference(y, fit.order.d, fit.order.D, fit.order.s);
    std::vector<std::vector<double>> exog_diff;
    for (std::size_t j = 0; j < fit.exog_coef.size(); ++j) {
        exog_diff.push_back(
            preprocess::difference(full_exog->column(j), fit.order.d, fit.order.D, fit.order.s)
                .values);
    }

    Coefficients c;
    c.ar = fit.ar;
    c.ma = fit.ma;
    c.sar = fit.sar;
    c.sma = fit.sma;
    c.intercept = fit.intercept;
    c.exog = fit.exog_coef;
    const auto u = adjusted_series(diffed.values, c, exog_diff);
    const auto pi = expand_poly(fit.ar, fit.sar, fit.order.s, -1.0);
    const auto psi = expand_poly(fit.ma, fit.sma, fit.order.s, +1.0);
    const std::size_t cond = static_cast<std::size_t>(fit.order.conditioning_lags());
    const auto eps = css_residuals(u, pi, psi, cond);

    // z_t = sum_j c_j y_{t-j}; the one-step level prediction replaces z_t
    // by its recursion forecast and keeps the actual history.
    const auto dpoly = preprocess::differencing_polynomial(fit.order.d, fit.order.D, fit.order.s);
    const std::size_t offset = dpoly.size() - 1; // y index of z[0]
    if (start < offset + cond) {
        throw ConfigError("one-step start must leave room for differencing and conditioning");
    }

    std::vector<double> preds;
    preds.reserve(y.size() - start);
    for (std::size_t t = start; t < y.size(); ++t) {
        const std::size_t zt = t - offset;
        const double z_hat = diffed.values[zt] - eps[zt];
        double level = z_hat;
        for (std::size_t j = 1; j < dpoly.size(); ++j) level -= dpoly[j] * y[t - j];
        preds.push_back(level);
    }
    return preds;
}

} // namespace gridcast::models
