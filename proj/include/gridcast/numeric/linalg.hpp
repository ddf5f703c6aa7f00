#pragma once

#include <cstddef>
#include <vector>

namespace gridcast::numeric {

/**
 * Ordinary least squares via column-pivoted QR.
 *
 * design is row-major with `rows x cols` entries. Throws
 * SingularRegression when the design is rank deficient.
 */
struct OlsResult {
    std::vector<double> coef;
    std::vector<double> stderr_coef;
    std::vector<double> residuals;
    double sse = 0.0;
    double sigma2 = 0.0; // SSE / (n - k)
};

OlsResult ols(const std::vector<double>& design, std::size_t rows, std::size_t cols,
              const std::vector<double>& target, bool with_stderr = false);

/// Coefficients only; same contract as ols().
std::vector<double> ols_coef(const std::vector<double>& design, std::size_t rows,
                             std::size_t cols, const std::vector<double>& target);

/// Rank of a row-major matrix (column-pivoted QR with default threshold).
std::size_t matrix_rank(const std::vector<double>& mat, std::size_t rows, std::size_t cols);

/**
 * Smallest root modulus of the lag polynomial 1 - c1 z - c2 z^2 - ...
 * (sign = -1, the AR convention) or 1 + c1 z + ... (sign = +1, MA).
 * Returns +inf for an empty coefficient list.
 */
double min_root_modulus(const std::vector<double>& coeffs, int sign);

/// Convolves two polynomials given as coefficient vectors (index = power).
std::vector<double> poly_multiply(const std::vector<double>& a, const std::vector<double>& b);

} // namespace gridcast::numeric
