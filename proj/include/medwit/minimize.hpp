// minimize.hpp — Thin wrappers over GSL's multidimensional minimisers.

#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace medwit::minimize {

struct Result {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;
// Returns f(x) and writes the gradient into `grad`.
using ObjectiveWithGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Derivative-free simplex search (GSL nmsimplex2). Converged when the simplex
// characteristic size drops below `size_tol`.
Result nelder_mead(const Objective& f, std::vector<double> x0, double step, int max_iter, double size_tol);

// Quasi-Newton BFGS with line search (GSL vector_bfgs2). Converged when the
// gradient norm drops below `grad_tol` or the line search cannot progress. Stops
// early (not converged) once the value reaches `stop_value`.
Result bfgs(const ObjectiveWithGradient& fdf, std::vector<double> x0, int max_iter, double grad_tol,
            double initial_step = 0.01, double stop_value = -std::numeric_limits<double>::infinity());

}  // namespace medwit::minimize
