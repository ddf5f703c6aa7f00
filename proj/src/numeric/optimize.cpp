#include "gridcast/numeric/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gridcast::numeric {

OptimResult nelder_mead(const Objective& f, std::vector<double> start, double step,
                        double rel_tol, int max_iter) {
    const std::size_t n = start.size();
    OptimResult out;
    if (n == 0) {
        out.x = start;
        out.value = f(start);
        out.converged = true;
        return out;
    }

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += (start[i] != 0.0) ? step * std::abs(start[i]) + step : step;
    }
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

        double spread = std::abs(values[worst] - values[best]);
        double scale = std::abs(values[best]) + std::abs(values[worst]) + 1e-30;
        if (spread / scale < rel_tol) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
            }
            return p;
        };

        std::vector<double> reflected = blend(-1.0);
        double fr = f(reflected);
        if (fr < values[best]) {
            std::vector<double> expanded = blend(-2.0);
            double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
        } else if (fr < values[second_worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
        } else {
            std::vector<double> contracted = blend(fr < values[worst] ? -0.5 : 0.5);
            double fc = f(contracted);
            if (fc < std::min(fr, values[worst])) {
                simplex[worst] = std::move(contracted);
                values[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
                    }
                    values[i] = f(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (values[i] < values[best]) best = i;
    }
    out.x = simplex[best];
    out.value = values[best];
    out.iterations = iter;
    return out;
}

namespace {

std::vector<double> central_gradient(const Objective& f, const std::vector<double>& x,
                                     double h) {
    std::vector<double> g(x.size());
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        double fp = f(probe);
        probe[i] = x[i] - h;
        double fm = f(probe);
        probe[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

} // namespace

OptimResult bfgs(const Objective& f, std::vector<double> start, double fd_step, double rel_tol,
                 int max_iter) {
    const std::size_t n = start.size();
    OptimResult out;
    out.x = std::move(start);
    out.value = f(out.x);
    if (n == 0) {
        out.converged = true;
        return out;
    }

    // Inverse Hessian approximation, dense row-major identity.
    std::vector<double> hinv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;

    std::vector<double> grad = central_gradient(f, out.x, fd_step);
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::vector<double> dir(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) dir[i] -= hinv[i * n + j] * grad[j];
        }
        double slope = std::inner_product(dir.begin(), dir.end(), grad.begin(), 0.0);
        if (slope >= 0.0) {
            // Reset to steepest descent when curvature info went bad.
            std::fill(hinv.begin(), hinv.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;
            for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
            slope = -std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
            if (slope == 0.0) {
                out.converged = true;
                break;
            }
        }

        // Backtracking Armijo line search.
        double alpha = 1.0;
        std::vector<double> xnew(n);
        double fnew = out.value;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xnew[i] = out.x[i] + alpha * dir[i];
            fnew = f(xnew);
            if (fnew <= out.value + 1e-4 * alpha * slope) {
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) {
            out.converged = true;
            break;
        }

        std::vector<double> gnew = central_gradient(f, xnew, fd_step);
        std::vector<double> s(n), ydiff(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xnew[i] - out.x[i];
            ydiff[i] = gnew[i] - grad[i];
        }
        double sy = std::inner_product(s.begin(), s.end(), ydiff.begin(), 0.0);
        if (sy > 1e-12) {
            // BFGS inverse update: H <- (I - r s y')H(I - r y s') + r s s'.
            double rho = 1.0 / sy;
            std::vector<double> hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) hy[i] += hinv[i * n + j] * ydiff[j];
            }
            double yhy = std::inner_product(ydiff.begin(), ydiff.end(), hy.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    hinv[i * n + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] -
                                              s[i] * hy[j]);
                }
            }
        }

        double improvement = std::abs(out.value - fnew);
        double scale = std::abs(out.value) + std::abs(fnew) + 1e-30;
        out.x = std::move(xnew);
        out.value = fnew;
        grad = std::move(gnew);
        if (improvement / scale < rel_tol) {
            out.converged = true;
            ++iter;
            break;
        }
        xnew.assign(n, 0.0);
    }
    out.iterations = iter;
    return out;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

} // namespace gridcast::numeric
