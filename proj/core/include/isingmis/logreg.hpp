#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace isingmis {

// Weighted, offset-aware L1 logistic regression in the node-conditional
// parameterization: the linear predictor is offset_i + 2 * x_i' theta, so the
// reported coefficients are directly on the edge-parameter scale.
struct LogRegProblem {
    int m = 0;  // rows
    int k = 0;  // columns
    std::vector<double> design;        // row-major m x k
    std::vector<std::int8_t> response;  // -1 / +1
    std::vector<double> weights;       // empty => all ones; nonnegative
    std::vector<double> offsets;       // empty => all zeros
    double lambda = 0.0;
};

struct SolverOptions {
    double tolerance = 1e-7;  // KKT residual
    int max_sweeps = 100000;
    bool fit_intercept = false;  // off for the Ising conditionals (no external field)
    std::vector<double> warm_start;
    bool track_objective = false;
};

struct LogRegSolution {
    std::vector<double> coefficients;
    double intercept = 0.0;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int sweeps = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // per sweep, when tracked
};

// Minimizes (1/W) sum_i w_i * log(1 + exp(-y_i * (offset_i + 2 x_i' theta)))
//            + lambda * ||theta||_1,   W = sum_i w_i,
// by cyclic coordinate descent with soft thresholding on the quadratic
// majorization of the logistic loss (curvature bound 1/4 per unit weight).
// Non-convergence is reported through the solution, not thrown.
LogRegSolution fit_l1_logistic(const LogRegProblem& problem, const SolverOptions& options = {});

// Smallest lambda for which the all-zero vector is optimal.
double lambda_max(const LogRegProblem& problem);

// Objective value at given coefficients (diagnostic / test hook).
double logistic_objective(const LogRegProblem& problem, std::span<const double> coefficients,
                          double intercept = 0.0);

// Solutions along a descending lambda grid, warm-started from the previous
// solution unless disabled.
std::vector<LogRegSolution> lambda_path(const LogRegProblem& base,
                                        std::span<const double> lambdas_descending,
                                        bool warm_starting = true,
                                        const SolverOptions& options = {});

}  // namespace isingmis
