#include "gridcast/diagnostics/correlogram.hpp"
#include "gridcast/core/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace gridcast::diagnostics {

std::vector<double> acf_values(const std::vector<double>& values, int max_lag) {
    const std::size_t n = values.size();
    if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= n) {
        throw LagTooLarge("max_lag must be below the series length");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);

    double denom = 0.0;
    for (double v : values) denom += (v - mean) * (v - mean);
    if (denom <= 0.0) {
        throw ConstantSeries("autocorrelation undefined for a constant series");
    }

    std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1);
    rho[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) {
            num += (values[t] - mean) * (values[t - static_cast<std::size_t>(k)] - mean);
        }
        rho[static_cast<std::size_t>(k)] = num / denom;
    }
    return rho;
}

std::vector<CorrelogramPoint> acf(const core::Series& s, int max_lag) {
    if (s.has_missing()) throw ConstraintViolation("acf requires a missing-free series");
    auto rho = acf_values(s.values(), max_lag);
    const double band = 1.96 / std::sqrt(static_cast<double>(s.size()));
    std::vector<CorrelogramPoint> out(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) {
        out[k] = {static_cast<int>(k), rho[k], band};
    }
    return out;
}

std::vector<double> pacf_toeplitz_solve(const std::vector<double>& autocorr, int max_lag) {
    std::vector<double> alpha(static_cast<std::size_t>(max_lag) + 1, 0.0);
    alpha[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        Eigen::MatrixXd R(k, k);
        Eigen::VectorXd r(k);
        for (int i = 0; i < k; ++i) {
            r(i) = autocorr[static_cast<std::size_t>(i) + 1];
            for (int j = 0; j < k; ++j) {
                R(i, j) = autocorr[static_cast<std::size_t>(std::abs(i - j))];
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
        if (!lu.isInvertible()) {
            throw SingularRegression("Yule-Walker system singular at lag " + std::to_string(k));
        }
        Eigen::VectorXd phi = lu.solve(r);
        alpha[static_cast<std::size_t>(k)] = phi(k - 1);
    }
    return alpha;
}

std::vector<double> pacf_values(const std::vector<double>& values, int max_lag) {
    const auto rho = acf_values(values, max_lag);

    // Durbin-Levinson recursion on the sample autocorrelations.
    std::vector<double> alpha(static_cast<std::size_t>(max_lag) + 1, 0.0);
    alpha[0] = 1.0;
    std::vector<double> phi_prev, phi_cur;
    for (int k = 1; k <= max_lag; ++k) {
        double num = rho[static_cast<std::size_t>(k)];
        double den = 1.0;
        for (int j = 1; j < k; ++j) {
            num -= phi_prev[static_cast<std::size_t>(j - 1)] * rho[static_cast<std::size_t>(k - j)];
            den -= phi_prev[static_cast<std::size_t>(j - 1)] * rho[static_cast<std::size_t>(j)];
        }
        if (std::abs(den) < 1e-14) {
            throw SingularRegression("Durbin-Levinson breakdown at lag " + std::to_string(k));
        }
        const double phi_kk = num / den;
        phi_cur.assign(static_cast<std::size_t>(k), 0.0);
        for (int j = 1; j < k; ++j) {
            phi_cur[static_cast<std::size_t>(j - 1)] =
                phi_prev[static_cast<std::size_t>(j - 1)] -
                phi_kk * phi_prev[static_cast<std::size_t>(k - 1 - j)];
        }
        phi_cur[static_cast<std::size_t>(k - 1)] = phi_kk;
        alpha[static_cast<std::size_t>(k)] = phi_kk;
        phi_prev = phi_cur;
    }

    // Cross-check against the dense solve of the same normal equations.
    const auto direct = pacf_toeplitz_solve(rho, max_lag);
    for (int k = 1; k <= max_lag; ++k) {
        if (std::abs(direct[static_cast<std::size_t>(k)] - alpha[static_cast<std::size_t>(k)]) >
            1e-6) {
            throw SingularRegression("PACF cross-check failed at lag " + std::to_string(k));
        }
    }
    return alpha;
}

std::vector<CorrelogramPoint> pacf(const core::Series& s, int max_lag) {
    if (s.has_missing()) throw ConstraintViolation("pacf requires a missing-free series");
    if (max_lag < 1 || static_cast<std::size_t>(max_lag) >= s.size() / 2) {
        throw LagTooLarge("pacf max_lag must be below length/2");
    }
    auto alpha = pacf_values(s.values(), max_lag);
    const double band = 1.96 / std::sqrt(static_cast<double>(s.size()));
    std::vector<CorrelogramPoint> out(alpha.size());
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        out[k] = {static_cast<int>(k), alpha[k], band};
    }
    return out;
}

} // namespace gridcast::diagnostics
