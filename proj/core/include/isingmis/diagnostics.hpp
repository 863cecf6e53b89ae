#pragma once

#include <vector>

#include "isingmis/detail/linalg.hpp"
#include "isingmis/graph.hpp"
#include "isingmis/spin.hpp"

namespace isingmis {

// Expected node-r logistic score at the true parameters, with the expectation
// over the misclassified distribution (exact enumeration, per-node law).
// Entries follow the columns V \ {r} in ascending node order.
std::vector<double> misclassified_score(const GraphSpec& graph, const MisclassLaw& law, NodeId r);

// Expected logistic Hessian (variance-weighted outer products of the observed
// predictors) under the misclassified distribution; symmetric PSD.
detail::Matrix misclassified_information(const GraphSpec& graph, const MisclassLaw& law, NodeId r);

struct NodeDiagnostics {
    NodeId node = -1;
    std::vector<double> expected_score;
    detail::Matrix information;
    double score_inf_norm = 0.0;
    // Smallest eigenvalue of the information restricted to the true
    // neighborhood; NaN when the node has no neighbors.
    double c_min = 0.0;
    // inf-norm of Q_{S^c S} (Q_SS)^{-1}; NaN when undefined.
    double incoherence = 0.0;
    double alpha = 0.0;  // 1 - incoherence
    // Largest eigenvalue of the second-moment matrix of the predictors.
    double d_max = 0.0;
    bool singular_information = false;
};

struct DiagnosticsReport {
    std::vector<NodeDiagnostics> per_node;
    double s_max = 0.0;
    double c_min = 0.0;
    double d_max = 0.0;
    double alpha = 0.0;
    bool a1_satisfied = false;  // dependency condition
    bool a2_satisfied = false;  // incoherence condition
    bool a3_satisfied = false;  // misclassification condition
    double a3_bound = 0.0;      // C_min^2 alpha^2 / (400 D_max d (2-alpha)^2)
    int n = 0;
    int d = 0;  // maximal true degree used in the bounds
    // Smallest admissible regularization: (16(2-alpha)/alpha) (sqrt(log p / n) + S_max/4).
    double lambda_lower_bound = 0.0;
    // lambda_tilde(lambda) = lambda - lambda_tilde_shift.
    double lambda_tilde_shift = 0.0;
};

// Exact verification of the dependency, incoherence, and misclassification
// conditions plus the regularization bound, for a given sample size. d = 0
// takes the maximal degree from the graph.
DiagnosticsReport check_assumptions(const GraphSpec& graph, const MisclassLaw& law, int n,
                                    int d = 0);

}  // namespace isingmis
