#pragma once

#include <span>
#include <vector>

#include "isingmis/graph.hpp"
#include "isingmis/logreg.hpp"
#include "isingmis/spin.hpp"

namespace isingmis {

enum class Aggregation { And, Or };

struct NeighborhoodEstimate {
    NodeId node = -1;
    // Length p; coefficients[node] is always 0. Support defines the estimated
    // neighborhood.
    std::vector<double> coefficients;

    NodeSet support() const;
};

struct NodeFitDiagnostics {
    NodeId node = -1;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int sweeps = 0;
    bool converged = true;
};

struct RwlFit {
    std::vector<NeighborhoodEstimate> neighborhoods;
    EdgeSetEstimate edge_set;
    double lambda = 0.0;
    Aggregation aggregation = Aggregation::And;
    std::vector<NodeFitDiagnostics> diagnostics;
};

struct RwlOptions {
    Aggregation aggregation = Aggregation::And;
    SolverOptions solver;
    // Optional per-observation weights applied to every node regression.
    std::vector<double> row_weights;
};

// Consolidates per-node supports into an undirected edge set. AND keeps a pair
// only when each endpoint's regression selects the other.
EdgeSetEstimate aggregate_edges(const std::vector<NeighborhoodEstimate>& neighborhoods,
                                Aggregation aggregation, int p);

// Nodewise L1-regularized logistic regressions at a shared lambda.
RwlFit rwl_fit(const SpinMatrix& data, double lambda, const RwlOptions& options = {});

// Misclassification-weighted baseline: every observation is expanded into one
// row per candidate configuration, weighted by the channel-only prior, and the
// nodewise regressions run on the expanded rows.
RwlFit rwl_fit_weighted(const SpinMatrix& data, double lambda, const MisclassLaw& law,
                        const NodeSet& candidates, const RwlOptions& options = {});

// Channel-only weight of each candidate configuration for one observation:
// product over candidates of gamma (flip) or 1-gamma (stay). Configurations
// are indexed with candidates[0] as the least significant bit, bit 0 <-> -1.
// The weights sum to 1.
std::vector<double> prior_state_weights(const MisclassLaw& law, int obs,
                                        std::span<const std::int8_t> observed_row,
                                        const NodeSet& candidates);

// Warm-started fits along a descending lambda grid (one pass per node).
std::vector<RwlFit> rwl_path(const SpinMatrix& data, std::span<const double> lambdas_descending,
                             const RwlOptions& options = {});
std::vector<RwlFit> rwl_weighted_path(const SpinMatrix& data,
                                      std::span<const double> lambdas_descending,
                                      const MisclassLaw& law, const NodeSet& candidates,
                                      const RwlOptions& options = {});

}  // namespace isingmis
