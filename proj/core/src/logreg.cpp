#include "isingmis/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isingmis {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
double log1p_exp(double z) {
    if (z > 36.0) return z;
    if (z < -36.0) return std::exp(z);
    return std::log1p(std::exp(z));
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

struct Workspace {
    const LogRegProblem* prob;
    std::vector<double> w;        // resolved weights
    std::vector<double> offsets;  // resolved offsets
    double total_weight = 0.0;

    double x(int i, int j) const {
        return prob->design[static_cast<std::size_t>(i) * static_cast<std::size_t>(prob->k) +
                            static_cast<std::size_t>(j)];
    }
};

Workspace make_workspace(const LogRegProblem& prob) {
    if (prob.m < 0 || prob.k < 0) throw std::invalid_argument("fit_l1_logistic: bad dimensions");
    if (prob.design.size() != static_cast<std::size_t>(prob.m) * static_cast<std::size_t>(prob.k)) {
        throw std::invalid_argument("fit_l1_logistic: design size != m*k");
    }
    if (prob.response.size() != static_cast<std::size_t>(prob.m)) {
        throw std::invalid_argument("fit_l1_logistic: response size != m");
    }
    if (!(prob.lambda >= 0.0)) throw std::invalid_argument("fit_l1_logistic: lambda < 0");
    for (double v : prob.design) {
        if (!std::isfinite(v)) throw std::invalid_argument("fit_l1_logistic: non-finite design");
    }
    for (std::int8_t y : prob.response) {
        if (y != -1 && y != 1) throw std::invalid_argument("fit_l1_logistic: response not in {-1,+1}");
    }

    Workspace ws;
    ws.prob = &prob;
    if (prob.weights.empty()) {
        ws.w.assign(static_cast<std::size_t>(prob.m), 1.0);
    } else {
        if (prob.weights.size() != static_cast<std::size_t>(prob.m)) {
            throw std::invalid_argument("fit_l1_logistic: weight size != m");
        }
        ws.w = prob.weights;
        for (double v : ws.w) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("fit_l1_logistic: negative or non-finite weight");
            }
        }
    }
    if (prob.offsets.empty()) {
        ws.offsets.assign(static_cast<std::size_t>(prob.m), 0.0);
    } else {
        if (prob.offsets.size() != static_cast<std::size_t>(prob.m)) {
            throw std::invalid_argument("fit_l1_logistic: offset size != m");
        }
        ws.offsets = prob.offsets;
        for (double v : ws.offsets) {
            if (!std::isfinite(v)) throw std::invalid_argument("fit_l1_logistic: non-finite offset");
        }
    }
    for (double v : ws.w) ws.total_weight += v;
    if (ws.total_weight <= 0.0) {
        throw std::invalid_argument("fit_l1_logistic: total weight is zero");
    }
    return ws;
}

double objective_from_eta(const Workspace& ws, const std::vector<double>& eta,
                          std::span<const double> theta, double lambda) {
    double loss = 0.0;
    for (int i = 0; i < ws.prob->m; ++i) {
        const double yi = static_cast<double>(ws.prob->response[static_cast<std::size_t>(i)]);
        loss += ws.w[static_cast<std::size_t>(i)] * log1p_exp(-yi * eta[static_cast<std::size_t>(i)]);
    }
    loss /= ws.total_weight;
    double penalty = 0.0;
    for (double t : theta) penalty += std::abs(t);
    return loss + lambda * penalty;
}

}  // namespace

LogRegSolution fit_l1_logistic(const LogRegProblem& prob, const SolverOptions& opts) {
    Workspace ws = make_workspace(prob);
    const int m = prob.m;
    const int k = prob.k;
    const double lambda = prob.lambda;

    std::vector<double> theta(static_cast<std::size_t>(k), 0.0);
    if (!opts.warm_start.empty()) {
        if (opts.warm_start.size() != static_cast<std::size_t>(k)) {
            throw std::invalid_argument("fit_l1_logistic: warm start size != k");
        }
        theta = opts.warm_start;
    }
    double intercept = 0.0;

    // Each outer sweep minimizes the global quadratic majorizer
    //   f(theta0) + g'(theta - theta0) + (theta - theta0)' G (theta - theta0) / 2
    // by inner coordinate descent. G = (1/W) sum_i w_i x_i x_i' dominates the
    // logistic Hessian because 4 sigma'(z) <= 1, so every outer step descends.
    std::vector<double> gram(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0.0);
    std::vector<double> gram0(static_cast<std::size_t>(k), 0.0);  // column means, intercept path
    for (int i = 0; i < m; ++i) {
        const double wi = ws.w[static_cast<std::size_t>(i)];
        if (wi == 0.0) continue;
        for (int a = 0; a < k; ++a) {
            const double xa = ws.x(i, a);
            if (xa == 0.0) continue;
            gram0[static_cast<std::size_t>(a)] += wi * xa;
            for (int b = a; b < k; ++b) {
                gram[static_cast<std::size_t>(a) * static_cast<std::size_t>(k) +
                     static_cast<std::size_t>(b)] += wi * xa * ws.x(i, b);
            }
        }
    }
    for (int a = 0; a < k; ++a) {
        gram0[static_cast<std::size_t>(a)] /= ws.total_weight;
        for (int b = a; b < k; ++b) {
            const double v = gram[static_cast<std::size_t>(a) * static_cast<std::size_t>(k) +
                                  static_cast<std::size_t>(b)] /
                             ws.total_weight;
            gram[static_cast<std::size_t>(a) * static_cast<std::size_t>(k) +
                 static_cast<std::size_t>(b)] = v;
            gram[static_cast<std::size_t>(b) * static_cast<std::size_t>(k) +
                 static_cast<std::size_t>(a)] = v;
        }
    }

    std::vector<double> eta = ws.offsets;
    for (int i = 0; i < m; ++i) {
        double dot = 0.0;
        for (int j = 0; j < k; ++j) dot += ws.x(i, j) * theta[static_cast<std::size_t>(j)];
        eta[static_cast<std::size_t>(i)] += 2.0 * dot + intercept;
    }

    std::vector<double> grad(static_cast<std::size_t>(k), 0.0);
    double grad0 = 0.0;
    auto refresh_gradient = [&] {
        std::fill(grad.begin(), grad.end(), 0.0);
        grad0 = 0.0;
        for (int i = 0; i < m; ++i) {
            const double wi = ws.w[static_cast<std::size_t>(i)];
            if (wi == 0.0) continue;
            const double ti = prob.response[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
            const double resid = wi * (sigmoid(eta[static_cast<std::size_t>(i)]) - ti);
            grad0 += resid;
            for (int j = 0; j < k; ++j) grad[static_cast<std::size_t>(j)] += 2.0 * ws.x(i, j) * resid;
        }
        for (int j = 0; j < k; ++j) grad[static_cast<std::size_t>(j)] /= ws.total_weight;
        grad0 /= ws.total_weight;
    };
    auto kkt_residual = [&] {
        double kkt = 0.0;
        for (int j = 0; j < k; ++j) {
            const double g = grad[static_cast<std::size_t>(j)];
            const double tj = theta[static_cast<std::size_t>(j)];
            const double r = tj != 0.0 ? std::abs(g + lambda * (tj > 0.0 ? 1.0 : -1.0))
                                       : std::max(std::abs(g) - lambda, 0.0);
            kkt = std::max(kkt, r);
        }
        if (opts.fit_intercept) kkt = std::max(kkt, std::abs(grad0));
        return kkt;
    };

    LogRegSolution sol;
    double kkt = std::numeric_limits<double>::infinity();
    int sweep = 0;
    std::vector<double> delta(static_cast<std::size_t>(k), 0.0);      // theta - theta0
    std::vector<double> gram_delta(static_cast<std::size_t>(k), 0.0);  // G (theta - theta0)
    for (; sweep < std::max(1, opts.max_sweeps); ++sweep) {
        refresh_gradient();
        kkt = kkt_residual();
        if (kkt <= opts.tolerance) {
            sol.converged = true;
            break;
        }

        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(gram_delta.begin(), gram_delta.end(), 0.0);
        double delta0 = 0.0;       // intercept shift
        double mean_delta = 0.0;   // gram0' delta, the intercept cross term
        for (int inner = 0; inner < 1000; ++inner) {
            double largest_move = 0.0;
            for (int j = 0; j < k; ++j) {
                const double h = gram[static_cast<std::size_t>(j) * static_cast<std::size_t>(k) +
                                      static_cast<std::size_t>(j)];
                if (h == 0.0) {
                    // Column irrelevant under the weights; the penalty pins it at 0.
                    if (theta[static_cast<std::size_t>(j)] != 0.0) {
                        delta[static_cast<std::size_t>(j)] -= theta[static_cast<std::size_t>(j)];
                        theta[static_cast<std::size_t>(j)] = 0.0;
                    }
                    continue;
                }
                const double model_grad = grad[static_cast<std::size_t>(j)] +
                                          gram_delta[static_cast<std::size_t>(j)] +
                                          0.5 * gram0[static_cast<std::size_t>(j)] * delta0;
                const double tj = theta[static_cast<std::size_t>(j)];
                const double updated = soft_threshold(tj - model_grad / h, lambda / h);
                if (updated != tj) {
                    const double move = updated - tj;
                    theta[static_cast<std::size_t>(j)] = updated;
                    delta[static_cast<std::size_t>(j)] += move;
                    for (int b = 0; b < k; ++b) {
                        gram_delta[static_cast<std::size_t>(b)] +=
                            gram[static_cast<std::size_t>(j) * static_cast<std::size_t>(k) +
                                 static_cast<std::size_t>(b)] *
                            move;
                    }
                    mean_delta += gram0[static_cast<std::size_t>(j)] * move;
                    largest_move = std::max(largest_move, std::abs(move));
                }
            }
            if (opts.fit_intercept) {
                // Quadratic model along the intercept: curvature 1/4.
                const double model_grad0 = grad0 + 0.25 * delta0 + 0.5 * mean_delta;
                const double move = -model_grad0 / 0.25;
                if (move != 0.0) {
                    delta0 += move;
                    intercept += move;
                    largest_move = std::max(largest_move, std::abs(move));
                }
            }
            if (largest_move <= 0.05 * opts.tolerance) break;
        }

        // Push the accepted step into the linear predictor.
        for (int i = 0; i < m; ++i) {
            double dot = 0.0;
            for (int j = 0; j < k; ++j) dot += ws.x(i, j) * delta[static_cast<std::size_t>(j)];
            eta[static_cast<std::size_t>(i)] += 2.0 * dot + delta0;
        }
        if (opts.track_objective) {
            sol.objective_trace.push_back(objective_from_eta(ws, eta, theta, lambda));
        }
    }
    if (!sol.converged && sweep == std::max(1, opts.max_sweeps)) {
        refresh_gradient();
        kkt = kkt_residual();
        sol.converged = kkt <= opts.tolerance;
    }

    sol.coefficients = std::move(theta);
    sol.intercept = intercept;
    sol.kkt_residual = kkt;
    sol.sweeps = sweep;
    sol.objective = objective_from_eta(ws, eta, sol.coefficients, lambda);
    return sol;
}

double lambda_max(const LogRegProblem& prob) {
    Workspace ws = make_workspace(prob);
    double lmax = 0.0;
    for (int j = 0; j < prob.k; ++j) {
        double g = 0.0;
        for (int i = 0; i < prob.m; ++i) {
            const double ti = prob.response[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
            g += ws.w[static_cast<std::size_t>(i)] * 2.0 * ws.x(i, j) *
                 (sigmoid(ws.offsets[static_cast<std::size_t>(i)]) - ti);
        }
        lmax = std::max(lmax, std::abs(g / ws.total_weight));
    }
    return lmax;
}

double logistic_objective(const LogRegProblem& prob, std::span<const double> coefficients,
                          double intercept) {
    Workspace ws = make_workspace(prob);
    if (coefficients.size() != static_cast<std::size_t>(prob.k)) {
        throw std::invalid_argument("logistic_objective: coefficient size != k");
    }
    std::vector<double> eta = ws.offsets;
    for (int i = 0; i < prob.m; ++i) {
        double dot = 0.0;
        for (int j = 0; j < prob.k; ++j) dot += ws.x(i, j) * coefficients[static_cast<std::size_t>(j)];
        eta[static_cast<std::size_t>(i)] += 2.0 * dot + intercept;
    }
    return objective_from_eta(ws, eta, coefficients, prob.lambda);
}

std::vector<LogRegSolution> lambda_path(const LogRegProblem& base,
                                        std::span<const double> lambdas_descending,
                                        bool warm_starting, const SolverOptions& options) {
    for (std::size_t i = 1; i < lambdas_descending.size(); ++i) {
        if (lambdas_descending[i] > lambdas_descending[i - 1]) {
            throw std::invalid_argument("lambda_path: grid must be sorted descending");
        }
    }
    std::vector<LogRegSolution> path;
    path.reserve(lambdas_descending.size());
    LogRegProblem prob = base;
    SolverOptions opts = options;
    for (double lambda : lambdas_descending) {
        prob.lambda = lambda;
        LogRegSolution sol = fit_l1_logistic(prob, opts);
        if (warm_starting) opts.warm_start = sol.coefficients;
        path.push_back(std::move(sol));
    }
    return path;
}

}  // namespace isingmis
