#include "isingmis/em.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isingmis/detail/math.hpp"

namespace isingmis {

WeightTable::WeightTable(NodeSet candidates, int n_obs)
    : candidates_(std::move(candidates)), n_(n_obs) {
    w_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(config_count()), 0.0);
}

namespace {

struct ComponentPair {
    NodeId s;
    NodeId t;
    double theta;  // symmetrized coefficient
};

// Pairs inside the component with a nonzero symmetrized coefficient. The
// nodewise regressions give asymmetric pairs; the Ising potential has a single
// parameter per pair, so the average is used.
std::vector<ComponentPair> component_pairs(const EMState& state, const NodeSet& component) {
    std::vector<ComponentPair> pairs;
    for (std::size_t a = 0; a < component.size(); ++a) {
        for (std::size_t b = a + 1; b < component.size(); ++b) {
            const NodeId s = component[a];
            const NodeId t = component[b];
            const double avg = 0.5 * (state.theta[static_cast<std::size_t>(s)]
                                                 [static_cast<std::size_t>(t)] +
                                      state.theta[static_cast<std::size_t>(t)]
                                                 [static_cast<std::size_t>(s)]);
            if (avg != 0.0) pairs.push_back({s, t, avg});
        }
    }
    return pairs;
}

}  // namespace

WeightTable estep_weights(const EMState& state, const SpinMatrix& data, const MisclassLaw& law,
                          const NodeSet& component, int candidate_limit) {
    if (!law.compatible_with(data)) {
        throw std::invalid_argument("estep_weights: law incompatible with data");
    }
    const NodeSet comp_candidates = node_set_intersection(component, state.partition.candidates);
    const int c = static_cast<int>(comp_candidates.size());
    if (c > candidate_limit) {
        throw std::invalid_argument("estep_weights: component has " + std::to_string(c) +
                                    " candidates, above the limit " +
                                    std::to_string(candidate_limit));
    }
    const std::vector<ComponentPair> pairs = component_pairs(state, component);

    WeightTable table(comp_candidates, data.n());
    const int configs = table.config_count();
    std::vector<std::int8_t> row(static_cast<std::size_t>(data.p()));
    std::vector<double> assoc(static_cast<std::size_t>(configs));
    std::vector<double> channel(static_cast<std::size_t>(configs));
    for (int i = 0; i < data.n(); ++i) {
        for (int s = 0; s < data.p(); ++s) row[static_cast<std::size_t>(s)] = data(i, s);
        double assoc_max = -std::numeric_limits<double>::infinity();
        for (int cfg = 0; cfg < configs; ++cfg) {
            for (int b = 0; b < c; ++b) {
                row[static_cast<std::size_t>(comp_candidates[static_cast<std::size_t>(b)])] =
                    WeightTable::config_spin(cfg, b);
            }
            double a = 0.0;
            for (const ComponentPair& pr : pairs) {
                a += pr.theta * static_cast<double>(row[static_cast<std::size_t>(pr.s)]) *
                     static_cast<double>(row[static_cast<std::size_t>(pr.t)]);
            }
            assoc[static_cast<std::size_t>(cfg)] = a;
            assoc_max = std::max(assoc_max, a);

            double ch = 1.0;
            for (int b = 0; b < c; ++b) {
                const NodeId s = comp_candidates[static_cast<std::size_t>(b)];
                const double g = law.gamma(i, s);
                const bool flipped = WeightTable::config_spin(cfg, b) != data(i, s);
                ch *= flipped ? g : 1.0 - g;
            }
            channel[static_cast<std::size_t>(cfg)] = ch;
        }
        double total = 0.0;
        for (int cfg = 0; cfg < configs; ++cfg) {
            const double w = channel[static_cast<std::size_t>(cfg)] *
                             std::exp(assoc[static_cast<std::size_t>(cfg)] - assoc_max);
            table.at(i, cfg) = w;
            total += w;
        }
        for (int cfg = 0; cfg < configs; ++cfg) table.at(i, cfg) /= total;
    }
    return table;
}

std::vector<double> em_mstep(const EMState& state, const SpinMatrix& data,
                             const WeightTable& weights, NodeId r, const SolverOptions& solver) {
    const int p = data.p();
    const NodeSet& update_set = state.partition.update_set;
    if (!node_set_contains(update_set, r)) {
        throw std::invalid_argument("em_mstep: node is not in the update set");
    }
    const NodeSet& cands = weights.candidates();
    const int c = static_cast<int>(cands.size());
    const int configs = weights.config_count();

    NodeSet predictors;  // U \ {r}, ascending
    for (NodeId s : update_set) {
        if (s != r) predictors.push_back(s);
    }
    const int k = static_cast<int>(predictors.size());

    LogRegProblem prob;
    prob.k = k;
    prob.lambda = state.lambda;

    std::vector<std::int8_t> row(static_cast<std::size_t>(p));
    for (int i = 0; i < data.n(); ++i) {
        // Frozen off-U neighborhood effect for this observation.
        double offset = 0.0;
        const auto& fixed_r = state.fixed_theta[static_cast<std::size_t>(r)];
        for (int s = 0; s < p; ++s) {
            const double f = fixed_r[static_cast<std::size_t>(s)];
            if (f != 0.0) offset += f * static_cast<double>(data(i, s));
        }
        offset *= 2.0;

        for (int cfg = 0; cfg < configs; ++cfg) {
            const double w = weights(i, cfg);
            if (w == 0.0) continue;
            for (int s = 0; s < p; ++s) row[static_cast<std::size_t>(s)] = data(i, s);
            for (int b = 0; b < c; ++b) {
                row[static_cast<std::size_t>(cands[static_cast<std::size_t>(b)])] =
                    WeightTable::config_spin(cfg, b);
            }
            prob.response.push_back(row[static_cast<std::size_t>(r)]);
            prob.weights.push_back(w);
            prob.offsets.push_back(offset);
            for (NodeId s : predictors) {
                prob.design.push_back(static_cast<double>(row[static_cast<std::size_t>(s)]));
            }
        }
    }
    prob.m = static_cast<int>(prob.response.size());

    SolverOptions opts = solver;
    opts.warm_start.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        opts.warm_start[static_cast<std::size_t>(j)] =
            state.theta[static_cast<std::size_t>(r)]
                       [static_cast<std::size_t>(predictors[static_cast<std::size_t>(j)])];
    }

    const LogRegSolution sol = fit_l1_logistic(prob, opts);
    std::vector<double> full(static_cast<std::size_t>(p), 0.0);
    for (int j = 0; j < k; ++j) {
        full[static_cast<std::size_t>(predictors[static_cast<std::size_t>(j)])] =
            sol.coefficients[static_cast<std::size_t>(j)];
    }
    return full;
}

double penalized_node_likelihood(const EMState& state, const SpinMatrix& data, NodeId r) {
    if (!node_set_contains(state.partition.update_set, r)) {
        throw std::invalid_argument("penalized_node_likelihood: node is not in the update set");
    }
    const int p = data.p();
    const auto& theta_r = state.theta[static_cast<std::size_t>(r)];
    const auto& fixed_r = state.fixed_theta[static_cast<std::size_t>(r)];

    double loglik = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        double field = 0.0;
        for (int s = 0; s < p; ++s) {
            if (s == r) continue;
            const double coef =
                theta_r[static_cast<std::size_t>(s)] + fixed_r[static_cast<std::size_t>(s)];
            if (coef != 0.0) field += coef * static_cast<double>(data(i, s));
        }
        loglik += detail::log_sigmoid(2.0 * static_cast<double>(data(i, r)) * field);
    }
    loglik /= data.n();

    double penalty = 0.0;
    for (int s = 0; s < p; ++s) {
        penalty += std::abs(theta_r[static_cast<std::size_t>(s)]) +
                   std::abs(fixed_r[static_cast<std::size_t>(s)]);
    }
    return loglik - state.lambda * penalty;
}

namespace {

EMState initial_state(const RwlFit& initial, const NodeSet& candidates, double lambda, int p) {
    EMState state;
    state.iteration = 0;
    state.lambda = lambda;
    state.partition = update_partition(initial.edge_set, candidates);
    state.theta.assign(static_cast<std::size_t>(p), std::vector<double>(static_cast<std::size_t>(p), 0.0));
    state.fixed_theta = state.theta;
    for (NodeId r : state.partition.update_set) {
        const auto& coefs = initial.neighborhoods[static_cast<std::size_t>(r)].coefficients;
        for (int s = 0; s < p; ++s) {
            if (s == r) continue;
            const double v = coefs[static_cast<std::size_t>(s)];
            if (v == 0.0) continue;
            if (node_set_contains(state.partition.update_set, s)) {
                state.theta[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = v;
            } else {
                state.fixed_theta[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = v;
            }
        }
    }
    return state;
}

std::vector<double> audit_row(const EMState& state, const SpinMatrix& data) {
    std::vector<double> row;
    row.reserve(state.partition.update_set.size());
    for (NodeId r : state.partition.update_set) {
        row.push_back(penalized_node_likelihood(state, data, r));
    }
    return row;
}

EdgeSetEstimate assemble_edge_set(const EMState& state, const RwlFit& initial, int p) {
    // Eq.-(14)-style AND rule inside U; outside U the initial fit stands.
    EdgeSetEstimate edges(p);
    const NodeSet& u = state.partition.update_set;
    for (NodeId s = 0; s < p; ++s) {
        for (NodeId t = s + 1; t < p; ++t) {
            const bool s_in = node_set_contains(u, s);
            const bool t_in = node_set_contains(u, t);
            bool keep = false;
            if (s_in && t_in) {
                keep = state.theta[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] != 0.0 &&
                       state.theta[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] != 0.0;
            } else if (!s_in && !t_in) {
                keep = initial.edge_set.has_edge(s, t);
            } else {
                const NodeId inside = s_in ? s : t;
                const NodeId outside = s_in ? t : s;
                const bool u_side = state.fixed_theta[static_cast<std::size_t>(inside)]
                                                     [static_cast<std::size_t>(outside)] != 0.0;
                const bool other_side =
                    initial.neighborhoods[static_cast<std::size_t>(outside)]
                        .coefficients[static_cast<std::size_t>(inside)] != 0.0;
                keep = u_side && other_side;
            }
            if (keep) edges.add_edge(s, t);
        }
    }
    return edges;
}

}  // namespace

EMResult em_update(const RwlFit& initial, const SpinMatrix& data, const MisclassLaw& law,
                   const NodeSet& candidates, double lambda, int iterations,
                   const EMOptions& options) {
    if (iterations < 1) throw std::invalid_argument("em_update: iterations must be >= 1");
    if (!law.compatible_with(data)) {
        throw std::invalid_argument("em_update: law incompatible with data");
    }
    const int p = data.p();
    if (static_cast<int>(initial.neighborhoods.size()) != p ||
        initial.edge_set.node_count() != p) {
        throw std::invalid_argument("em_update: initial fit dimension != data dimension");
    }
    for (NodeId s : candidates) {
        if (s < 0 || s >= p) throw std::out_of_range("em_update: candidate out of range");
    }

    EMResult result;
    result.state = initial_state(initial, candidates, lambda, p);
    EMState& state = result.state;
    for (const GraphComponent& comp : state.partition.components) {
        if (static_cast<int>(comp.candidates.size()) > options.candidate_limit) {
            throw std::invalid_argument("em_update: component exceeds the candidate limit");
        }
    }
    result.audit.update_set = state.partition.update_set;
    if (options.audit_likelihood) {
        result.audit.per_iteration.push_back(audit_row(state, data));
    }

    for (int k = 0; k < iterations; ++k) {
        for (const GraphComponent& comp : state.partition.components) {
            if (comp.candidates.empty()) continue;  // no latent variables
            const WeightTable table =
                estep_weights(state, data, law, comp.nodes, options.candidate_limit);
            // Jacobi update: every node's M step sees the same weight table and
            // the new coefficients land only after the component finishes.
            std::vector<std::vector<double>> updated;
            updated.reserve(comp.nodes.size());
            for (NodeId r : comp.nodes) {
                updated.push_back(em_mstep(state, data, table, r, options.solver));
            }
            for (std::size_t idx = 0; idx < comp.nodes.size(); ++idx) {
                state.theta[static_cast<std::size_t>(comp.nodes[idx])] = std::move(updated[idx]);
            }
        }
        state.iteration = k + 1;
        if (options.audit_likelihood) {
            result.audit.per_iteration.push_back(audit_row(state, data));
        }
        if (options.record_edge_sets) {
            result.edge_set_trajectory.push_back(assemble_edge_set(state, initial, p));
        }
    }

    result.edge_set = options.record_edge_sets ? result.edge_set_trajectory.back()
                                               : assemble_edge_set(state, initial, p);
    return result;
}

}  // namespace isingmis
