#pragma once

#include <vector>

#include "isingmis/graph.hpp"
#include "isingmis/logreg.hpp"
#include "isingmis/rwl.hpp"
#include "isingmis/spin.hpp"

namespace isingmis {

// Largest candidate count handled in a single component; the E-step table has
// 2^c columns.
inline constexpr int kDefaultCandidateLimit = 20;

// Parameters of one EM pass. theta holds the per-node coefficients being
// updated (theta[r][s] = coefficient of s in r's regression, both in U);
// fixed_theta holds the initial-fit coefficients of neighbors outside U,
// which stay frozen and enter the regressions as offsets.
struct EMState {
    int iteration = 0;
    NodePartition partition;
    std::vector<std::vector<double>> theta;        // p x p, rows for r in U
    std::vector<std::vector<double>> fixed_theta;  // p x p, columns outside U
    double lambda = 0.0;
};

// Posterior weights of candidate configurations, one row per observation.
// Configurations index the component's candidates in ascending node order:
// bit b of the configuration is candidates()[b], bit 0 <-> spin -1.
class WeightTable {
public:
    WeightTable() = default;
    WeightTable(NodeSet candidates, int n_obs);

    const NodeSet& candidates() const { return candidates_; }
    int n() const { return n_; }
    int config_count() const { return 1 << static_cast<int>(candidates_.size()); }

    double operator()(int obs, int config) const {
        return w_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(config_count()) +
                  static_cast<std::size_t>(config)];
    }
    double& at(int obs, int config) {
        return w_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(config_count()) +
                  static_cast<std::size_t>(config)];
    }

    static std::int8_t config_spin(int config, int bit) {
        return (config >> bit) & 1 ? std::int8_t{1} : std::int8_t{-1};
    }

private:
    NodeSet candidates_;
    int n_ = 0;
    std::vector<double> w_;
};

// E step for one component: posterior of each candidate configuration given
// the observed update-set states, factorized as exp(association within the
// component under the symmetrized current coefficients) times the flip/stay
// channel product, normalized per observation.
WeightTable estep_weights(const EMState& state, const SpinMatrix& data, const MisclassLaw& law,
                          const NodeSet& component, int candidate_limit = kDefaultCandidateLimit);

// M step for node r: expands every observation into one row per candidate
// configuration of r's component (predictors over U \ {r}, response column r,
// both with candidates replaced), weighted by the E-step posterior, with the
// frozen off-U contributions as offsets; solves the L1 logistic regression at
// the state's lambda. Returns a length-p coefficient vector supported on
// U \ {r}.
std::vector<double> em_mstep(const EMState& state, const SpinMatrix& data,
                             const WeightTable& weights, NodeId r,
                             const SolverOptions& solver = {});

// Penalized conditional log likelihood of node r on the observed data,
// (1/n) sum_i log P(x_r | x_rest) - lambda * l1(free + frozen coefficients).
// The frozen coefficients contribute to both the conditional (as offsets) and
// the penalty (as a constant).
double penalized_node_likelihood(const EMState& state, const SpinMatrix& data, NodeId r);

struct EMOptions {
    int candidate_limit = kDefaultCandidateLimit;
    SolverOptions solver;
    bool audit_likelihood = false;
    // Also record the edge set after every update, not just the last one.
    bool record_edge_sets = false;
};

struct EMAudit {
    NodeSet update_set;
    // per_iteration[k][i] = penalized likelihood of update_set[i] after k
    // updates (k = 0 is the initial fit).
    std::vector<std::vector<double>> per_iteration;
};

struct EMResult {
    EMState state;
    EdgeSetEstimate edge_set;
    EMAudit audit;
    // edge_set_trajectory[k] is the edge set after k+1 updates (only when
    // record_edge_sets is on; the last entry equals edge_set).
    std::vector<EdgeSetEstimate> edge_set_trajectory;
};

// Full EM refinement: build the partition from the initial fit's edge set,
// alternate E and M steps per component for the given number of updates, and
// re-aggregate edges. Within one update all M steps consume the same weight
// table. Components without candidates are skipped. The final edge set uses
// the AND rule on the updated coefficients inside U, keeps initial-fit edges
// with both endpoints outside U, and for mixed pairs combines the frozen
// U-side coefficient with the initial fit on the other side.
EMResult em_update(const RwlFit& initial, const SpinMatrix& data, const MisclassLaw& law,
                   const NodeSet& candidates, double lambda, int iterations,
                   const EMOptions& options = {});

}  // namespace isingmis
