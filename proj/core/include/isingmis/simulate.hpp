#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isingmis/em.hpp"
#include "isingmis/graph.hpp"
#include "isingmis/ising.hpp"
#include "isingmis/rwl.hpp"
#include "isingmis/spin.hpp"

namespace isingmis {

enum class EstimatorKind { Rwl, RwlWeighted, RwlEm, WeightedEm };

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::Rwl;
    int em_iterations = 1;

    std::string label() const;
};

// Misclassification scheme descriptor; realized per replication.
struct LawScheme {
    enum class Kind { PerNode, HalfObservations };
    Kind kind = Kind::HalfObservations;
    // PerNode: length-p flip probabilities applied to every observation.
    std::vector<double> per_node;
    // HalfObservations: a seeded uniformly random half of the rows gets this
    // flip probability on the candidate columns, all other cells 0.
    double within_prob = 0.6;
    // What the weighted/EM estimators are told about the channel: the
    // realized per-cell probabilities, or only the marginal per-node rate
    // (within_prob / 2 on candidates under the half-observation scheme).
    enum class Knowledge { Realized, Marginal };
    Knowledge knowledge = Knowledge::Marginal;
    // Marginal knowledge only: overrides the per-node rate the estimators
    // assume on candidates (< 0 keeps within_prob / 2). Supports channel
    // misspecification experiments.
    double assumed_gamma = -1.0;
};

// Edge-to-class attribution for the reported metrics. Exclusive assigns each
// pair to the first class it touches (candidate, then participant, then
// other). Overlapping scores a class over every pair touching it. PerNode
// pools the nodewise neighborhood counts of the class members, so a pair
// contributes once per endpoint in the class.
enum class ClassAttribution { Exclusive, Overlapping, PerNode };

struct ScenarioConfig {
    GraphSpec graph;
    NodeSet candidates;
    // When candidates is empty and the scheme is per-node, nodes with
    // node_gamma > candidate_threshold become candidates.
    double candidate_threshold = -1.0;
    int n = 60;
    int replications = 100;
    // Replication identities are offset + local index, so two half runs with
    // matching offsets concatenate to the full run.
    int replication_offset = 0;
    LawScheme law;
    std::vector<double> lambda_grid;  // empty => default_lambda_grid(p, n)
    std::vector<EstimatorSpec> estimators;
    RngSeed seed;
    SampleMethod sampling = SampleMethod::Exact;
    GibbsOptions gibbs;
    int candidate_limit = kDefaultCandidateLimit;
    SolverOptions solver;
    // Fixed initial-fit lambda for the EM estimators; when unset the Youden
    // rule picks it from the base estimator's pooled curve.
    std::optional<double> em_initial_lambda;
    ClassAttribution attribution = ClassAttribution::Overlapping;
};

// count log-spaced values on [lo, hi] * sqrt(log p / n), descending.
std::vector<double> default_lambda_grid(int p, int n, int count = 30, double lo = 0.01,
                                        double hi = 1.5);

struct MetricsRecord {
    std::string estimator;
    double lambda = 0.0;
    int replication = 0;
    std::string node_class;  // candidate | participant | other
    long tp = 0, fp = 0, tn = 0, fn = 0;

    double tpr() const { return tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0; }
    double fpr() const { return fp + tn > 0 ? double(fp) / double(fp + tn) : 0.0; }
};

struct RocPoint {
    double lambda = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
};

struct ClassCurve {
    std::string estimator;
    std::string node_class;
    std::vector<RocPoint> points;  // one per grid lambda, grid order
    double auc = 0.0;
};

struct NodeErrorRate {
    std::string estimator;
    NodeId node = 0;
    double error_rate = 0.0;  // mean (FP+FN)/pairs over replications, at the matched lambda
};

struct EdgeSelectionFrequency {
    std::string estimator;
    NodeId s = 0;
    NodeId t = 0;
    bool true_edge = false;
    double frequency = 0.0;  // at the matched lambda
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<MetricsRecord> records;
    std::vector<ClassCurve> curves;
    std::map<std::string, double> auc;            // "estimator/class"
    std::map<std::string, double> youden_lambda;  // per base estimator label
    std::vector<NodeErrorRate> node_errors;
    std::vector<EdgeSelectionFrequency> edge_selection;
    int failed_replications = 0;
    std::vector<int> failed_replication_ids;
    std::vector<std::string> failure_messages;
};

// Monte-Carlo scenario driver. Per replication: sample Ising data, realize the
// misclassification scheme, apply the channel, and fit every estimator across
// the lambda grid. EM estimators start from the base fit at the Youden-rule
// lambda (computed against ground truth over the base estimator's pooled
// curve) and sweep the EM lambda over the grid. Deterministic given the seed;
// replication k uses seed ^ (offset + k).
ScenarioResult run_scenario(const ScenarioConfig& config, int threads = 1);

// The 12-node symmetric simulation network: three candidate nodes, all edge
// weights 1/2.
GraphSpec build_figure1_network();
NodeSet figure1_candidates();

// Synthetic connected surrogate for the 20-node fMRI-derived update set:
// preferential-attachment topology with random weights shrunk toward their
// mean. Deterministic per seed.
GraphSpec build_fmri_like_network(int p_target = 20, double shrinkage = 0.5,
                                  RngSeed seed = RngSeed{20240101});
NodeSet fmri_like_candidates();

enum class OutputFormat { Csv, Json };

// Writes records, ROC curves, AUC summaries, per-node error rates, adjacency
// selection frequencies, and a summary JSON into out_dir. Byte-deterministic
// for a fixed result.
void emit_outputs(const ScenarioResult& result, OutputFormat format,
                  const std::filesystem::path& out_dir);

}  // namespace isingmis
