#include "isingmis/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "isingmis/io.hpp"

namespace isingmis {

std::string EstimatorSpec::label() const {
    switch (kind) {
        case EstimatorKind::Rwl:
            return "RWL";
        case EstimatorKind::RwlWeighted:
            return "RWL_WEIGHTED";
        case EstimatorKind::RwlEm:
            return "RWL_EM" + std::to_string(em_iterations);
        case EstimatorKind::WeightedEm:
            return "WEIGHTED_EM" + std::to_string(em_iterations);
    }
    return "?";
}

std::vector<double> default_lambda_grid(int p, int n, int count, double lo, double hi) {
    if (count < 1 || lo <= 0.0 || hi < lo) {
        throw std::invalid_argument("default_lambda_grid: bad grid parameters");
    }
    const double scale = std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        grid[static_cast<std::size_t>(i)] = scale * hi * std::pow(lo / hi, frac);
    }
    return grid;  // descending
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent sub-streams of one replication's seed.
RngSeed stream_seed(std::uint64_t rep_seed, std::uint64_t stream) {
    return RngSeed{splitmix64(splitmix64(rep_seed) ^ stream)};
}
constexpr std::uint64_t kSampleStream = 0xA0761D6478BD642Full;
constexpr std::uint64_t kSchemeStream = 0xE7037ED1A0B428DBull;
constexpr std::uint64_t kFlipStream = 0x8EBC6AF09C88C6E3ull;

struct RepData {
    SpinMatrix clean;
    SpinMatrix observed;
    MisclassLaw law;  // what the estimators are told (see LawScheme::Knowledge)
};

MisclassLaw realize_law(const LawScheme& scheme, const NodeSet& candidates, int n, int p,
                        RngSeed seed) {
    if (scheme.kind == LawScheme::Kind::PerNode) {
        if (static_cast<int>(scheme.per_node.size()) != p) {
            throw std::invalid_argument("scenario law: per-node gamma length != p");
        }
        return MisclassLaw::per_node(scheme.per_node);
    }
    // Half of the rows, chosen uniformly at random, get within_prob on the
    // candidate columns; everything else stays clean.
    std::vector<double> cells(static_cast<std::size_t>(n) * static_cast<std::size_t>(p), 0.0);
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
        const std::uint64_t j =
            static_cast<std::uint64_t>(i) + rng.uniform_index(static_cast<std::uint64_t>(n - i));
        std::swap(rows[static_cast<std::size_t>(i)], rows[j]);
    }
    for (int i = 0; i < half; ++i) {
        for (NodeId s : candidates) {
            cells[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]) *
                      static_cast<std::size_t>(p) +
                  static_cast<std::size_t>(s)] = scheme.within_prob;
        }
    }
    return MisclassLaw::per_cell(n, p, std::move(cells));
}

RepData make_rep_data(const ScenarioConfig& cfg, int rep) {
    const std::uint64_t rep_seed =
        cfg.seed.value ^ static_cast<std::uint64_t>(cfg.replication_offset + rep);
    RepData data;
    data.clean = sample_ising(cfg.graph, cfg.n, cfg.sampling, stream_seed(rep_seed, kSampleStream),
                              cfg.gibbs);
    const MisclassLaw realized = realize_law(cfg.law, cfg.candidates, cfg.n,
                                             cfg.graph.node_count(),
                                             stream_seed(rep_seed, kSchemeStream));
    data.observed =
        apply_misclassification(data.clean, realized, stream_seed(rep_seed, kFlipStream));
    if (cfg.law.kind == LawScheme::Kind::HalfObservations &&
        cfg.law.knowledge == LawScheme::Knowledge::Marginal) {
        const double rate =
            cfg.law.assumed_gamma >= 0.0 ? cfg.law.assumed_gamma : cfg.law.within_prob / 2.0;
        std::vector<double> marginal(static_cast<std::size_t>(cfg.graph.node_count()), 0.0);
        for (NodeId s : cfg.candidates) marginal[static_cast<std::size_t>(s)] = rate;
        data.law = MisclassLaw::per_node(std::move(marginal));
    } else if (cfg.law.kind == LawScheme::Kind::HalfObservations &&
               cfg.law.assumed_gamma >= 0.0) {
        // Realized pattern, but the estimators assume a different rate on the
        // affected cells.
        std::vector<double> cells(realized.values());
        for (double& v : cells) {
            if (v > 0.0) v = cfg.law.assumed_gamma;
        }
        data.law = MisclassLaw::per_cell(cfg.n, cfg.graph.node_count(), std::move(cells));
    } else {
        data.law = realized;
    }
    return data;
}

constexpr int kClassCount = 4;  // candidate, participant, other, all (internal)
const char* kClassNames[3] = {"candidate", "participant", "other"};

struct MetricsStore {
    int n_lambda = 0;
    int reps = 0;
    std::vector<EdgeMetrics> cells;  // [lambda][class][rep]

    MetricsStore() = default;
    MetricsStore(int nl, int r) : n_lambda(nl), reps(r) {
        cells.assign(static_cast<std::size_t>(nl) * kClassCount * static_cast<std::size_t>(r), {});
    }
    EdgeMetrics& at(int li, int cls, int rep) {
        return cells[(static_cast<std::size_t>(li) * kClassCount + static_cast<std::size_t>(cls)) *
                         static_cast<std::size_t>(reps) +
                     static_cast<std::size_t>(rep)];
    }
    const EdgeMetrics& at(int li, int cls, int rep) const {
        return const_cast<MetricsStore*>(this)->at(li, cls, rep);
    }
};

struct ClassSets {
    NodeSet candidates;
    NodeSet participants;  // N(N(C)) \ C on the true graph
    NodeSet update_true;   // N(N(C)) on the true graph
    NodeSet all_nodes;
    ClassAttribution attribution = ClassAttribution::Overlapping;
};

EdgeMetrics metrics_minus(const EdgeMetrics& a, const EdgeMetrics& b) {
    return {a.tp - b.tp, a.fp - b.fp, a.tn - b.tn, a.fn - b.fn};
}

EdgeMetrics metrics_plus(const EdgeMetrics& a, const EdgeMetrics& b) {
    return {a.tp + b.tp, a.fp + b.fp, a.tn + b.tn, a.fn + b.fn};
}

// Pairs with both endpoints inside the class.
EdgeMetrics within_class_metrics(const EdgeSetEstimate& est, const GraphSpec& truth,
                                 const NodeSet& cls) {
    EdgeMetrics m;
    for (std::size_t a = 0; a < cls.size(); ++a) {
        for (std::size_t b = a + 1; b < cls.size(); ++b) {
            const bool truth_edge = truth.has_edge(cls[a], cls[b]);
            const bool est_edge = est.has_edge(cls[a], cls[b]);
            if (truth_edge && est_edge) ++m.tp;
            else if (truth_edge) ++m.fn;
            else if (est_edge) ++m.fp;
            else ++m.tn;
        }
    }
    return m;
}

void fill_metrics(MetricsStore& store, int li, int rep, const EdgeSetEstimate& est,
                  const GraphSpec& truth, const ClassSets& cls) {
    const EdgeMetrics m_cand = edge_metrics(est, truth, cls.candidates);
    const EdgeMetrics m_cu = edge_metrics(est, truth, cls.update_true);
    const EdgeMetrics m_all = edge_metrics(est, truth, cls.all_nodes);
    switch (cls.attribution) {
        case ClassAttribution::Exclusive:
            store.at(li, 0, rep) = m_cand;
            store.at(li, 1, rep) = metrics_minus(m_cu, m_cand);
            break;
        case ClassAttribution::Overlapping:
            store.at(li, 0, rep) = m_cand;
            store.at(li, 1, rep) = edge_metrics(est, truth, cls.participants);
            break;
        case ClassAttribution::PerNode:
            store.at(li, 0, rep) =
                metrics_plus(m_cand, within_class_metrics(est, truth, cls.candidates));
            store.at(li, 1, rep) =
                metrics_plus(edge_metrics(est, truth, cls.participants),
                             within_class_metrics(est, truth, cls.participants));
            break;
    }
    store.at(li, 2, rep) = metrics_minus(m_all, m_cu);
    store.at(li, 3, rep) = m_all;
}

void parallel_for_reps(int reps, int threads, const std::function<void(int)>& work) {
    threads = std::max(1, std::min(threads, reps));
    if (threads == 1) {
        for (int r = 0; r < reps; ++r) work(r);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const int r = next.fetch_add(1);
                if (r >= reps) break;
                work(r);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// Pooled over the included replications.
EdgeMetrics pooled(const MetricsStore& store, int li, int cls, const std::vector<char>& failed) {
    EdgeMetrics sum;
    for (int rep = 0; rep < store.reps; ++rep) {
        if (failed[static_cast<std::size_t>(rep)]) continue;
        const EdgeMetrics& m = store.at(li, cls, rep);
        sum.tp += m.tp;
        sum.fp += m.fp;
        sum.tn += m.tn;
        sum.fn += m.fn;
    }
    return sum;
}

int youden_index(const MetricsStore& store, const std::vector<char>& failed) {
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int li = 0; li < store.n_lambda; ++li) {
        const EdgeMetrics m = pooled(store, li, 3, failed);
        const double value = m.tpr() + 1.0 - m.fpr();
        if (value > best_value) {
            best_value = value;
            best = li;
        }
    }
    return best;
}

double trapezoid_auc(std::vector<std::pair<double, double>> points) {
    points.emplace_back(0.0, 0.0);
    points.emplace_back(1.0, 1.0);
    std::sort(points.begin(), points.end());
    double auc = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        auc += (points[i].first - points[i - 1].first) *
               (points[i].second + points[i - 1].second) / 2.0;
    }
    return auc;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, int threads) {
    ScenarioConfig cfg = config;
    const int p = cfg.graph.node_count();
    if (p < 2) throw std::invalid_argument("run_scenario: graph too small");
    if (cfg.replications < 1) throw std::invalid_argument("run_scenario: replications < 1");
    if (cfg.estimators.empty()) throw std::invalid_argument("run_scenario: no estimators");
    if (cfg.n < 2) throw std::invalid_argument("run_scenario: n < 2");
    if (cfg.sampling == SampleMethod::Exact && p > kExactLimit) {
        throw std::invalid_argument("run_scenario: exact sampling requires p <= exact limit");
    }
    if (cfg.lambda_grid.empty()) cfg.lambda_grid = default_lambda_grid(p, cfg.n);
    std::sort(cfg.lambda_grid.begin(), cfg.lambda_grid.end(), std::greater<>());
    for (double l : cfg.lambda_grid) {
        if (!(l >= 0.0)) throw std::invalid_argument("run_scenario: negative lambda in grid");
    }

    if (cfg.candidates.empty() && cfg.candidate_threshold >= 0.0 &&
        cfg.law.kind == LawScheme::Kind::PerNode) {
        for (int s = 0; s < p; ++s) {
            if (cfg.law.per_node[static_cast<std::size_t>(s)] > cfg.candidate_threshold) {
                cfg.candidates.push_back(s);
            }
        }
    }
    cfg.candidates = make_node_set(cfg.candidates);
    for (NodeId s : cfg.candidates) {
        if (s < 0 || s >= p) throw std::out_of_range("run_scenario: candidate out of range");
    }

    ClassSets cls;
    cls.candidates = cfg.candidates;
    cls.update_true = neighbors(cfg.graph, neighbors(cfg.graph, cfg.candidates));
    cls.participants = node_set_difference(cls.update_true, cls.candidates);
    cls.attribution = cfg.attribution;
    for (int s = 0; s < p; ++s) cls.all_nodes.push_back(s);

    const int n_lambda = static_cast<int>(cfg.lambda_grid.size());
    const int reps = cfg.replications;

    bool need_rwl = false;
    bool need_w = false;
    bool any_em = false;
    int max_iters_rwl = 0;
    int max_iters_w = 0;
    for (const EstimatorSpec& est : cfg.estimators) {
        switch (est.kind) {
            case EstimatorKind::Rwl:
                need_rwl = true;
                break;
            case EstimatorKind::RwlWeighted:
                need_w = true;
                break;
            case EstimatorKind::RwlEm:
                need_rwl = true;
                any_em = true;
                if (est.em_iterations < 1) throw std::invalid_argument("run_scenario: EM iterations < 1");
                max_iters_rwl = std::max(max_iters_rwl, est.em_iterations);
                break;
            case EstimatorKind::WeightedEm:
                need_w = true;
                any_em = true;
                if (est.em_iterations < 1) throw std::invalid_argument("run_scenario: EM iterations < 1");
                max_iters_w = std::max(max_iters_w, est.em_iterations);
                break;
        }
    }
    (void)any_em;

    MetricsStore store_rwl(need_rwl ? n_lambda : 0, need_rwl ? reps : 0);
    MetricsStore store_w(need_w ? n_lambda : 0, need_w ? reps : 0);
    std::vector<MetricsStore> store_est(cfg.estimators.size());
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
        store_est[e] = MetricsStore(n_lambda, reps);
    }

    std::vector<char> failed(static_cast<std::size_t>(reps), 0);
    std::vector<std::string> failure_msgs(static_cast<std::size_t>(reps));

    RwlOptions rwl_opts;
    rwl_opts.solver = cfg.solver;

    // Phase 1: base-estimator curves across the grid.
    parallel_for_reps(reps, threads, [&](int rep) {
        try {
            const RepData data = make_rep_data(cfg, rep);
            if (need_rwl) {
                const std::vector<RwlFit> fits = rwl_path(data.observed, cfg.lambda_grid, rwl_opts);
                for (int li = 0; li < n_lambda; ++li) {
                    fill_metrics(store_rwl, li, rep, fits[static_cast<std::size_t>(li)].edge_set,
                                 cfg.graph, cls);
                }
            }
            if (need_w) {
                const std::vector<RwlFit> fits = rwl_weighted_path(
                    data.observed, cfg.lambda_grid, data.law, cfg.candidates, rwl_opts);
                for (int li = 0; li < n_lambda; ++li) {
                    fill_metrics(store_w, li, rep, fits[static_cast<std::size_t>(li)].edge_set,
                                 cfg.graph, cls);
                }
            }
        } catch (const std::exception& ex) {
            failed[static_cast<std::size_t>(rep)] = 1;
            failure_msgs[static_cast<std::size_t>(rep)] = ex.what();
        }
    });

    // Matched lambda for the EM initial fits (and the matched-lambda outputs).
    auto grid_index_of = [&](double lambda) {
        int best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (int li = 0; li < n_lambda; ++li) {
            const double gap = std::abs(cfg.lambda_grid[static_cast<std::size_t>(li)] - lambda);
            if (gap < best_gap) {
                best_gap = gap;
                best = li;
            }
        }
        return best;
    };
    int matched_rwl = 0;
    int matched_w = 0;
    if (cfg.em_initial_lambda) {
        matched_rwl = matched_w = grid_index_of(*cfg.em_initial_lambda);
    } else {
        if (need_rwl) matched_rwl = youden_index(store_rwl, failed);
        if (need_w) matched_w = youden_index(store_w, failed);
    }

    // Per-estimator matched-lambda edge sets for the selection-frequency and
    // node-error outputs.
    std::vector<std::vector<EdgeSetEstimate>> matched_edges(
        cfg.estimators.size(), std::vector<EdgeSetEstimate>(static_cast<std::size_t>(reps)));

    EMOptions em_opts;
    em_opts.candidate_limit = cfg.candidate_limit;
    em_opts.solver = cfg.solver;
    em_opts.record_edge_sets = true;

    // Phase 2: EM sweeps and matched-lambda refits.
    parallel_for_reps(reps, threads, [&](int rep) {
        if (failed[static_cast<std::size_t>(rep)]) return;
        try {
            const RepData data = make_rep_data(cfg, rep);
            RwlFit base_rwl;
            RwlFit base_w;
            if (need_rwl) {
                base_rwl = rwl_fit(data.observed,
                                   cfg.lambda_grid[static_cast<std::size_t>(matched_rwl)], rwl_opts);
            }
            if (need_w) {
                base_w = rwl_fit_weighted(data.observed,
                                          cfg.lambda_grid[static_cast<std::size_t>(matched_w)],
                                          data.law, cfg.candidates, rwl_opts);
            }
            // EM sweeps are shared across estimators with the same base: one
            // run at the maximal update count records every intermediate
            // edge set.
            std::vector<std::vector<EdgeSetEstimate>> em_rwl_traj;  // [lambda][iters]
            std::vector<std::vector<EdgeSetEstimate>> em_w_traj;
            if (max_iters_rwl > 0) {
                em_rwl_traj.resize(static_cast<std::size_t>(n_lambda));
                for (int li = 0; li < n_lambda; ++li) {
                    EMResult res = em_update(base_rwl, data.observed, data.law, cfg.candidates,
                                             cfg.lambda_grid[static_cast<std::size_t>(li)],
                                             max_iters_rwl, em_opts);
                    em_rwl_traj[static_cast<std::size_t>(li)] = std::move(res.edge_set_trajectory);
                }
            }
            if (max_iters_w > 0) {
                em_w_traj.resize(static_cast<std::size_t>(n_lambda));
                for (int li = 0; li < n_lambda; ++li) {
                    EMResult res = em_update(base_w, data.observed, data.law, cfg.candidates,
                                             cfg.lambda_grid[static_cast<std::size_t>(li)],
                                             max_iters_w, em_opts);
                    em_w_traj[static_cast<std::size_t>(li)] = std::move(res.edge_set_trajectory);
                }
            }
            for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
                const EstimatorSpec& est = cfg.estimators[e];
                switch (est.kind) {
                    case EstimatorKind::Rwl:
                        matched_edges[e][static_cast<std::size_t>(rep)] = base_rwl.edge_set;
                        break;
                    case EstimatorKind::RwlWeighted:
                        matched_edges[e][static_cast<std::size_t>(rep)] = base_w.edge_set;
                        break;
                    case EstimatorKind::RwlEm: {
                        for (int li = 0; li < n_lambda; ++li) {
                            const EdgeSetEstimate& es =
                                em_rwl_traj[static_cast<std::size_t>(li)]
                                           [static_cast<std::size_t>(est.em_iterations - 1)];
                            fill_metrics(store_est[e], li, rep, es, cfg.graph, cls);
                        }
                        matched_edges[e][static_cast<std::size_t>(rep)] =
                            em_rwl_traj[static_cast<std::size_t>(matched_rwl)]
                                       [static_cast<std::size_t>(est.em_iterations - 1)];
                        break;
                    }
                    case EstimatorKind::WeightedEm: {
                        for (int li = 0; li < n_lambda; ++li) {
                            const EdgeSetEstimate& es =
                                em_w_traj[static_cast<std::size_t>(li)]
                                         [static_cast<std::size_t>(est.em_iterations - 1)];
                            fill_metrics(store_est[e], li, rep, es, cfg.graph, cls);
                        }
                        matched_edges[e][static_cast<std::size_t>(rep)] =
                            em_w_traj[static_cast<std::size_t>(matched_w)]
                                     [static_cast<std::size_t>(est.em_iterations - 1)];
                        break;
                    }
                }
            }
        } catch (const std::exception& ex) {
            failed[static_cast<std::size_t>(rep)] = 1;
            failure_msgs[static_cast<std::size_t>(rep)] = ex.what();
        }
    });

    // Copy the base-kind curves into the estimator slots that are plain fits.
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
        if (cfg.estimators[e].kind == EstimatorKind::Rwl) store_est[e] = store_rwl;
        if (cfg.estimators[e].kind == EstimatorKind::RwlWeighted) store_est[e] = store_w;
    }

    ScenarioResult result;
    result.config = cfg;
    if (need_rwl) {
        result.youden_lambda["RWL"] = cfg.lambda_grid[static_cast<std::size_t>(matched_rwl)];
    }
    if (need_w) {
        result.youden_lambda["RWL_WEIGHTED"] = cfg.lambda_grid[static_cast<std::size_t>(matched_w)];
    }

    int ok_reps = 0;
    for (int rep = 0; rep < reps; ++rep) {
        if (failed[static_cast<std::size_t>(rep)]) {
            ++result.failed_replications;
            result.failed_replication_ids.push_back(cfg.replication_offset + rep);
            result.failure_messages.push_back(failure_msgs[static_cast<std::size_t>(rep)]);
        } else {
            ++ok_reps;
        }
    }
    if (ok_reps == 0) throw std::runtime_error("run_scenario: every replication failed");

    // Per-replication records and pooled curves.
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
        const std::string label = cfg.estimators[e].label();
        for (int li = 0; li < n_lambda; ++li) {
            for (int rep = 0; rep < reps; ++rep) {
                if (failed[static_cast<std::size_t>(rep)]) continue;
                for (int c = 0; c < 3; ++c) {
                    const EdgeMetrics& m = store_est[e].at(li, c, rep);
                    result.records.push_back({label, cfg.lambda_grid[static_cast<std::size_t>(li)],
                                              cfg.replication_offset + rep, kClassNames[c], m.tp,
                                              m.fp, m.tn, m.fn});
                }
            }
        }
        for (int c = 0; c < 3; ++c) {
            ClassCurve curve;
            curve.estimator = label;
            curve.node_class = kClassNames[c];
            std::vector<std::pair<double, double>> roc;
            for (int li = 0; li < n_lambda; ++li) {
                const EdgeMetrics m = pooled(store_est[e], li, c, failed);
                curve.points.push_back(
                    {cfg.lambda_grid[static_cast<std::size_t>(li)], m.tpr(), m.fpr()});
                roc.emplace_back(m.fpr(), m.tpr());
            }
            curve.auc = trapezoid_auc(std::move(roc));
            result.auc[label + "/" + kClassNames[c]] = curve.auc;
            result.curves.push_back(std::move(curve));
        }

        // Matched-lambda aggregates: per-node error rates and per-edge
        // selection frequencies.
        std::vector<long> node_err(static_cast<std::size_t>(p), 0);
        std::vector<long> pair_sel(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0);
        for (int rep = 0; rep < reps; ++rep) {
            if (failed[static_cast<std::size_t>(rep)]) continue;
            const EdgeSetEstimate& es = matched_edges[e][static_cast<std::size_t>(rep)];
            for (NodeId s = 0; s < p; ++s) {
                for (NodeId t = s + 1; t < p; ++t) {
                    const bool sel = es.has_edge(s, t);
                    const bool truth = cfg.graph.has_edge(s, t);
                    if (sel) {
                        ++pair_sel[static_cast<std::size_t>(s) * static_cast<std::size_t>(p) +
                                   static_cast<std::size_t>(t)];
                    }
                    if (sel != truth) {
                        ++node_err[static_cast<std::size_t>(s)];
                        ++node_err[static_cast<std::size_t>(t)];
                    }
                }
            }
        }
        for (NodeId r = 0; r < p; ++r) {
            result.node_errors.push_back(
                {label, r,
                 static_cast<double>(node_err[static_cast<std::size_t>(r)]) /
                     (static_cast<double>(ok_reps) * (p - 1))});
        }
        for (NodeId s = 0; s < p; ++s) {
            for (NodeId t = s + 1; t < p; ++t) {
                result.edge_selection.push_back(
                    {label, s, t, cfg.graph.has_edge(s, t),
                     static_cast<double>(pair_sel[static_cast<std::size_t>(s) *
                                                      static_cast<std::size_t>(p) +
                                                  static_cast<std::size_t>(t)]) /
                         static_cast<double>(ok_reps)});
            }
        }
    }
    return result;
}

GraphSpec build_figure1_network() {
    // Three symmetric blocks of four nodes. Each block is a participant
    // triangle whose third node carries a pendant candidate and the ring link
    // to the next block, so the participants inform the candidates. All
    // couplings 1/2.
    std::vector<WeightedEdge> edges;
    for (int b = 0; b < 3; ++b) {
        const int base = 4 * b;
        const int next = (base + 4) % 12;
        edges.push_back({base + 0, base + 1, 0.5});
        edges.push_back({base + 0, base + 2, 0.5});
        edges.push_back({base + 1, base + 2, 0.5});
        edges.push_back({base + 2, base + 3, 0.5});
        edges.push_back({base + 2, next, 0.5});
    }
    return GraphSpec(12, std::move(edges));
}

NodeSet figure1_candidates() { return {3, 7, 11}; }

GraphSpec build_fmri_like_network(int p_target, double shrinkage, RngSeed seed) {
    if (p_target < 2) throw std::invalid_argument("build_fmri_like_network: p too small");
    if (!(shrinkage >= 0.0 && shrinkage <= 1.0)) {
        throw std::invalid_argument("build_fmri_like_network: shrinkage outside [0,1]");
    }
    Rng rng(seed);
    // Preferential attachment gives the hub-heavy degree profile of the
    // connectome subgraph; extra edges thicken it beyond a tree.
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::vector<int> degree(static_cast<std::size_t>(p_target), 0);
    std::vector<NodeId> endpoints;
    pairs.push_back({0, 1});
    degree[0] = degree[1] = 1;
    endpoints.push_back(0);
    endpoints.push_back(1);
    for (NodeId v = 2; v < p_target; ++v) {
        const NodeId target = endpoints[rng.uniform_index(endpoints.size())];
        pairs.push_back({std::min(v, target), std::max(v, target)});
        ++degree[static_cast<std::size_t>(v)];
        ++degree[static_cast<std::size_t>(target)];
        endpoints.push_back(v);
        endpoints.push_back(target);
    }
    const int extra = p_target / 2;
    std::set<std::pair<NodeId, NodeId>> seen(pairs.begin(), pairs.end());
    int added = 0;
    while (added < extra) {
        NodeId s = static_cast<NodeId>(rng.uniform_index(static_cast<std::uint64_t>(p_target)));
        NodeId t = endpoints[rng.uniform_index(endpoints.size())];
        if (s == t) continue;
        if (s > t) std::swap(s, t);
        if (!seen.insert({s, t}).second) continue;
        pairs.push_back({s, t});
        ++added;
    }

    std::vector<WeightedEdge> edges;
    edges.reserve(pairs.size());
    double mean = 0.0;
    std::vector<double> draws;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double w = 0.25 + 0.5 * rng.uniform();
        draws.push_back(w);
        mean += w;
    }
    mean /= static_cast<double>(draws.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double w = draws[i] + shrinkage * (mean - draws[i]);
        edges.push_back({pairs[i].first, pairs[i].second, w});
    }
    return GraphSpec(p_target, std::move(edges));
}

NodeSet fmri_like_candidates() { return {4, 9, 14, 19}; }

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_outputs: cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("emit_outputs: write failed for " + path.string());
}

}  // namespace

void emit_outputs(const ScenarioResult& result, OutputFormat format,
                  const std::filesystem::path& out_dir) {
    if (result.records.empty()) {
        throw std::invalid_argument("emit_outputs: no records to write");
    }
    std::filesystem::create_directories(out_dir);

    if (format == OutputFormat::Csv) {
        std::string records = "estimator,lambda,replication,node_class,tp,fp,tn,fn,tpr,fpr\n";
        for (const MetricsRecord& r : result.records) {
            records += r.estimator + "," + format_double(r.lambda) + "," +
                       std::to_string(r.replication) + "," + r.node_class + "," +
                       std::to_string(r.tp) + "," + std::to_string(r.fp) + "," +
                       std::to_string(r.tn) + "," + std::to_string(r.fn) + "," +
                       format_double(r.tpr()) + "," + format_double(r.fpr()) + "\n";
        }
        write_file(out_dir / "records.csv", records);

        std::string roc = "estimator,node_class,lambda,tpr,fpr\n";
        for (const ClassCurve& c : result.curves) {
            for (const RocPoint& pt : c.points) {
                roc += c.estimator + "," + c.node_class + "," + format_double(pt.lambda) + "," +
                       format_double(pt.tpr) + "," + format_double(pt.fpr) + "\n";
            }
        }
        write_file(out_dir / "roc_curves.csv", roc);

        std::string auc = "estimator,node_class,auc\n";
        for (const ClassCurve& c : result.curves) {
            auc += c.estimator + "," + c.node_class + "," + format_double(c.auc) + "\n";
        }
        write_file(out_dir / "auc_summary.csv", auc);

        std::string nodes = "estimator,node,error_rate\n";
        for (const NodeErrorRate& r : result.node_errors) {
            nodes += r.estimator + "," + std::to_string(r.node) + "," +
                     format_double(r.error_rate) + "\n";
        }
        write_file(out_dir / "node_error_rates.csv", nodes);

        std::string edges = "estimator,s,t,true_edge,frequency\n";
        for (const EdgeSelectionFrequency& r : result.edge_selection) {
            edges += r.estimator + "," + std::to_string(r.s) + "," + std::to_string(r.t) + "," +
                     (r.true_edge ? "1" : "0") + "," + format_double(r.frequency) + "\n";
        }
        write_file(out_dir / "edge_selection.csv", edges);
    } else {
        write_file(out_dir / "records.json", records_to_json(result.records));
        write_file(out_dir / "roc_curves.json", curves_to_json(result.curves));
        write_file(out_dir / "node_error_rates.json", node_errors_to_json(result.node_errors));
        write_file(out_dir / "edge_selection.json", edge_selection_to_json(result.edge_selection));
    }
    write_file(out_dir / "summary.json", scenario_summary_to_json(result));
}

}  // namespace isingmis
