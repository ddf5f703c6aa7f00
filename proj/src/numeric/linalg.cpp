#include "gridcast/numeric/linalg.hpp"
#include "gridcast/core/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace gridcast::numeric {

namespace {

Eigen::MatrixXd to_matrix(const std::vector<double>& data, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r * cols + c];
        }
    }
    return m;
}

} // namespace

OlsResult ols(const std::vector<double>& design, std::size_t rows, std::size_t cols,
              const std::vector<double>& target, bool with_stderr) {
    if (rows * cols != design.size() || target.size() != rows) {
        throw SingularRegression("ols: design/target dimension mismatch");
    }
    if (rows < cols) throw SingularRegression("ols: fewer rows than columns");

    Eigen::MatrixXd X = to_matrix(design, rows, cols);
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(target.data(),
                                                          static_cast<Eigen::Index>(rows));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (static_cast<std::size_t>(qr.rank()) < cols) {
        throw SingularRegression("ols: rank-deficient design matrix");
    }
    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd resid = y - X * beta;

    OlsResult out;
    out.coef.assign(beta.data(), beta.data() + beta.size());
    out.residuals.assign(resid.data(), resid.data() + resid.size());
    out.sse = resid.squaredNorm();
    out.sigma2 = (rows > cols) ? out.sse / static_cast<double>(rows - cols) : 0.0;

    if (with_stderr) {
        Eigen::MatrixXd xtx_inv =
            (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(
                static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(cols)));
        out.stderr_coef.resize(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            double v = out.sigma2 * xtx_inv(static_cast<Eigen::Index>(j),
                                            static_cast<Eigen::Index>(j));
            out.stderr_coef[j] = v > 0.0 ? std::sqrt(v) : 0.0;
        }
    }
    return out;
}

std::vector<double> ols_coef(const std::vector<double>& design, std::size_t rows,
                             std::size_t cols, const std::vector<double>& target) {
    return ols(design, rows, cols, target, false).coef;
}

std::size_t matrix_rank(const std::vector<double>& mat, std::size_t rows, std::size_t cols) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(to_matrix(mat, rows, cols));
    return static_cast<std::size_t>(qr.rank());
}

double min_root_modulus(const std::vector<double>& coeffs, int sign) {
    // Strip trailing near-zero coefficients; the polynomial degree drops.
    std::size_t degree = coeffs.size();
    while (degree > 0 && std::abs(coeffs[degree - 1]) < 1e-12) --degree;
    if (degree == 0) return std::numeric_limits<double>::infinity();

    // Roots of 1 -+ c1 z - ... are reciprocals of the eigenvalues of the
    // companion matrix of r^n -+ c1 r^{n-1} -+ ... (r = 1/z).
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(degree),
                                                      static_cast<Eigen::Index>(degree));
    for (std::size_t i = 0; i < degree; ++i) {
        companion(0, static_cast<Eigen::Index>(i)) = -static_cast<double>(sign) * coeffs[i];
    }
    for (std::size_t i = 1; i < degree; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    double max_recip = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        max_recip = std::max(max_recip, std::abs(solver.eigenvalues()(i)));
    }
    if (max_recip == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / max_recip;
}

std::vector<double> poly_multiply(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

} // namespace gridcast::numeric
