#pragma once

#include <functional>
#include <vector>

namespace gridcast::numeric {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/**
 * Nelder-Mead simplex minimization.
 *
 * Stops when the relative spread of simplex values falls below rel_tol
 * or max_iter is reached.
 */
OptimResult nelder_mead(const Objective& f, std::vector<double> start, double step = 0.1,
                        double rel_tol = 1e-9, int max_iter = 500);

/**
 * BFGS quasi-Newton minimization with central-difference gradients
 * (step fd_step) and backtracking line search. Stops on relative
 * objective change below rel_tol or max_iter iterations.
 */
OptimResult bfgs(const Objective& f, std::vector<double> start, double fd_step = 1e-5,
                 double rel_tol = 1e-9, int max_iter = 200);

/// Golden-section minimization of a unimodal scalar function on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      double tol = 1e-8);

} // namespace gridcast::numeric
