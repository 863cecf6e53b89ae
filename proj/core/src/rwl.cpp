#include "isingmis/rwl.hpp"

#include <cmath>
#include <stdexcept>

namespace isingmis {

NodeSet NeighborhoodEstimate::support() const {
    NodeSet out;
    for (NodeId t = 0; t < static_cast<NodeId>(coefficients.size()); ++t) {
        if (t != node && coefficients[static_cast<std::size_t>(t)] != 0.0) out.push_back(t);
    }
    return out;
}

EdgeSetEstimate aggregate_edges(const std::vector<NeighborhoodEstimate>& neighborhoods,
                                Aggregation aggregation, int p) {
    EdgeSetEstimate edges(p);
    for (NodeId s = 0; s < p; ++s) {
        for (NodeId t = s + 1; t < p; ++t) {
            const bool st = neighborhoods[static_cast<std::size_t>(s)]
                                .coefficients[static_cast<std::size_t>(t)] != 0.0;
            const bool ts = neighborhoods[static_cast<std::size_t>(t)]
                                .coefficients[static_cast<std::size_t>(s)] != 0.0;
            const bool keep = aggregation == Aggregation::And ? (st && ts) : (st || ts);
            if (keep) edges.add_edge(s, t);
        }
    }
    return edges;
}

namespace {

// One node regression: response = column r, predictors = remaining columns.
LogRegProblem node_problem(const SpinMatrix& data, NodeId r, double lambda,
                           const std::vector<double>& row_weights) {
    const int n = data.n();
    const int p = data.p();
    LogRegProblem prob;
    prob.m = n;
    prob.k = p - 1;
    prob.lambda = lambda;
    prob.design.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(p - 1));
    prob.response.resize(static_cast<std::size_t>(n));
    prob.weights = row_weights;
    for (int i = 0; i < n; ++i) {
        prob.response[static_cast<std::size_t>(i)] = data(i, r);
        int col = 0;
        for (int t = 0; t < p; ++t) {
            if (t == r) continue;
            prob.design[static_cast<std::size_t>(i) * static_cast<std::size_t>(p - 1) +
                        static_cast<std::size_t>(col)] = static_cast<double>(data(i, t));
            ++col;
        }
    }
    return prob;
}

std::vector<double> expand_coefficients(NodeId r, int p, const std::vector<double>& compact) {
    std::vector<double> full(static_cast<std::size_t>(p), 0.0);
    int col = 0;
    for (int t = 0; t < p; ++t) {
        if (t == r) continue;
        full[static_cast<std::size_t>(t)] = compact[static_cast<std::size_t>(col)];
        ++col;
    }
    return full;
}

RwlFit assemble_fit(std::vector<NeighborhoodEstimate> hoods,
                    std::vector<NodeFitDiagnostics> diags, double lambda,
                    Aggregation aggregation, int p) {
    RwlFit fit;
    fit.lambda = lambda;
    fit.aggregation = aggregation;
    fit.edge_set = aggregate_edges(hoods, aggregation, p);
    fit.neighborhoods = std::move(hoods);
    fit.diagnostics = std::move(diags);
    return fit;
}

// Expanded problem for the channel-weighted baseline: one row per
// (observation, candidate configuration), zero-weight rows dropped.
LogRegProblem weighted_node_problem(const SpinMatrix& data, NodeId r, double lambda,
                                    const MisclassLaw& law, const NodeSet& candidates,
                                    const std::vector<double>& row_weights) {
    const int n = data.n();
    const int p = data.p();
    const int c = static_cast<int>(candidates.size());
    const int configs = 1 << c;

    LogRegProblem prob;
    prob.k = p - 1;
    prob.lambda = lambda;
    std::vector<std::int8_t> row(static_cast<std::size_t>(p));
    for (int i = 0; i < n; ++i) {
        const std::vector<double> weights = prior_state_weights(law, i, data.row(i), candidates);
        const double base = row_weights.empty() ? 1.0 : row_weights[static_cast<std::size_t>(i)];
        for (int cfg = 0; cfg < configs; ++cfg) {
            const double w = base * weights[static_cast<std::size_t>(cfg)];
            if (w == 0.0) continue;
            for (int t = 0; t < p; ++t) row[static_cast<std::size_t>(t)] = data(i, t);
            for (int b = 0; b < c; ++b) {
                row[static_cast<std::size_t>(candidates[static_cast<std::size_t>(b)])] =
                    (cfg >> b) & 1 ? std::int8_t{1} : std::int8_t{-1};
            }
            prob.response.push_back(row[static_cast<std::size_t>(r)]);
            prob.weights.push_back(w);
            for (int t = 0; t < p; ++t) {
                if (t == r) continue;
                prob.design.push_back(static_cast<double>(row[static_cast<std::size_t>(t)]));
            }
        }
    }
    prob.m = static_cast<int>(prob.response.size());
    return prob;
}

}  // namespace

std::vector<double> prior_state_weights(const MisclassLaw& law, int obs,
                                        std::span<const std::int8_t> observed_row,
                                        const NodeSet& candidates) {
    if (candidates.empty()) throw std::invalid_argument("prior_state_weights: empty candidate set");
    if (law.p() != static_cast<int>(observed_row.size())) {
        throw std::invalid_argument("prior_state_weights: law dimension != row length");
    }
    const int c = static_cast<int>(candidates.size());
    std::vector<double> weights(static_cast<std::size_t>(1) << c, 1.0);
    for (int cfg = 0; cfg < static_cast<int>(weights.size()); ++cfg) {
        double w = 1.0;
        for (int b = 0; b < c; ++b) {
            const NodeId s = candidates[static_cast<std::size_t>(b)];
            const double g = law.gamma(obs, s);
            const std::int8_t z = (cfg >> b) & 1 ? std::int8_t{1} : std::int8_t{-1};
            w *= z != observed_row[static_cast<std::size_t>(s)] ? g : 1.0 - g;
        }
        weights[static_cast<std::size_t>(cfg)] = w;
    }
    return weights;
}

RwlFit rwl_fit(const SpinMatrix& data, double lambda, const RwlOptions& options) {
    if (data.n() < 2) throw std::invalid_argument("rwl_fit: need at least two observations");
    if (!(lambda >= 0.0)) throw std::invalid_argument("rwl_fit: lambda < 0");
    const int p = data.p();
    std::vector<NeighborhoodEstimate> hoods(static_cast<std::size_t>(p));
    std::vector<NodeFitDiagnostics> diags(static_cast<std::size_t>(p));
    for (NodeId r = 0; r < p; ++r) {
        const LogRegProblem prob = node_problem(data, r, lambda, options.row_weights);
        const LogRegSolution sol = fit_l1_logistic(prob, options.solver);
        hoods[static_cast<std::size_t>(r)] = {r, expand_coefficients(r, p, sol.coefficients)};
        diags[static_cast<std::size_t>(r)] = {r, sol.objective, sol.kkt_residual, sol.sweeps,
                                              sol.converged};
    }
    return assemble_fit(std::move(hoods), std::move(diags), lambda, options.aggregation, p);
}

RwlFit rwl_fit_weighted(const SpinMatrix& data, double lambda, const MisclassLaw& law,
                        const NodeSet& candidates, const RwlOptions& options) {
    if (data.n() < 2) throw std::invalid_argument("rwl_fit_weighted: need at least two observations");
    if (!law.compatible_with(data)) {
        throw std::invalid_argument("rwl_fit_weighted: law incompatible with data");
    }
    if (candidates.empty()) return rwl_fit(data, lambda, options);
    const int p = data.p();
    for (NodeId s : candidates) {
        if (s < 0 || s >= p) throw std::out_of_range("rwl_fit_weighted: candidate out of range");
    }
    std::vector<NeighborhoodEstimate> hoods(static_cast<std::size_t>(p));
    std::vector<NodeFitDiagnostics> diags(static_cast<std::size_t>(p));
    for (NodeId r = 0; r < p; ++r) {
        const LogRegProblem prob =
            weighted_node_problem(data, r, lambda, law, candidates, options.row_weights);
        const LogRegSolution sol = fit_l1_logistic(prob, options.solver);
        hoods[static_cast<std::size_t>(r)] = {r, expand_coefficients(r, p, sol.coefficients)};
        diags[static_cast<std::size_t>(r)] = {r, sol.objective, sol.kkt_residual, sol.sweeps,
                                              sol.converged};
    }
    return assemble_fit(std::move(hoods), std::move(diags), lambda, options.aggregation, p);
}

namespace {

template <typename ProblemBuilder>
std::vector<RwlFit> path_impl(const SpinMatrix& data, std::span<const double> lambdas,
                              const RwlOptions& options, ProblemBuilder&& build) {
    const int p = data.p();
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (lambdas[i] > lambdas[i - 1]) {
            throw std::invalid_argument("rwl_path: grid must be sorted descending");
        }
    }
    // neighborhoods[lambda][node]
    std::vector<std::vector<NeighborhoodEstimate>> hoods(
        lambdas.size(), std::vector<NeighborhoodEstimate>(static_cast<std::size_t>(p)));
    std::vector<std::vector<NodeFitDiagnostics>> diags(
        lambdas.size(), std::vector<NodeFitDiagnostics>(static_cast<std::size_t>(p)));
    for (NodeId r = 0; r < p; ++r) {
        const LogRegProblem base = build(r);
        const std::vector<LogRegSolution> sols = lambda_path(base, lambdas, true, options.solver);
        for (std::size_t li = 0; li < lambdas.size(); ++li) {
            hoods[li][static_cast<std::size_t>(r)] = {
                r, expand_coefficients(r, p, sols[li].coefficients)};
            diags[li][static_cast<std::size_t>(r)] = {r, sols[li].objective, sols[li].kkt_residual,
                                                      sols[li].sweeps, sols[li].converged};
        }
    }
    std::vector<RwlFit> fits;
    fits.reserve(lambdas.size());
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        fits.push_back(assemble_fit(std::move(hoods[li]), std::move(diags[li]), lambdas[li],
                                    options.aggregation, p));
    }
    return fits;
}

}  // namespace

std::vector<RwlFit> rwl_path(const SpinMatrix& data, std::span<const double> lambdas_descending,
                             const RwlOptions& options) {
    return path_impl(data, lambdas_descending, options, [&](NodeId r) {
        return node_problem(data, r, 0.0, options.row_weights);
    });
}

std::vector<RwlFit> rwl_weighted_path(const SpinMatrix& data,
                                      std::span<const double> lambdas_descending,
                                      const MisclassLaw& law, const NodeSet& candidates,
                                      const RwlOptions& options) {
    if (candidates.empty()) return rwl_path(data, lambdas_descending, options);
    return path_impl(data, lambdas_descending, options, [&](NodeId r) {
        return weighted_node_problem(data, r, 0.0, law, candidates, options.row_weights);
    });
}

}  // namespace isingmis
