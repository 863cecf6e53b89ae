#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace isingmis {

using NodeId = int;

// Sorted, duplicate-free node index set.
using NodeSet = std::vector<NodeId>;

NodeSet make_node_set(std::vector<NodeId> nodes);
bool node_set_contains(const NodeSet& set, NodeId node);
NodeSet node_set_union(const NodeSet& a, const NodeSet& b);
NodeSet node_set_difference(const NodeSet& a, const NodeSet& b);
NodeSet node_set_intersection(const NodeSet& a, const NodeSet& b);

struct WeightedEdge {
    NodeId s = 0;
    NodeId t = 0;
    double weight = 0.0;
};

// Undirected weighted graph over nodes [0, p). Edges are canonicalized s < t.
// Immutable after construction.
class GraphSpec {
public:
    GraphSpec() = default;
    GraphSpec(int p, std::vector<WeightedEdge> edges);

    int node_count() const { return p_; }
    const std::vector<WeightedEdge>& edges() const { return edges_; }
    const std::vector<NodeId>& neighbors_of(NodeId r) const;
    const std::vector<std::vector<NodeId>>& adjacency() const { return adj_; }

    bool has_edge(NodeId s, NodeId t) const;
    // Coupling parameter for the pair, 0 when the pair is not an edge.
    double weight(NodeId s, NodeId t) const;
    int max_degree() const;

private:
    int p_ = 0;
    std::vector<WeightedEdge> edges_;
    std::vector<std::vector<NodeId>> adj_;
};

// Unweighted undirected edge set over nodes [0, p); pairs canonicalized s < t.
class EdgeSetEstimate {
public:
    EdgeSetEstimate() = default;
    explicit EdgeSetEstimate(int p);
    EdgeSetEstimate(int p, const std::vector<std::pair<NodeId, NodeId>>& edges);

    void add_edge(NodeId s, NodeId t);
    bool has_edge(NodeId s, NodeId t) const;
    int node_count() const { return p_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::set<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    const std::vector<std::vector<NodeId>>& adjacency() const { return adj_; }

    bool operator==(const EdgeSetEstimate& other) const {
        return p_ == other.p_ && edges_ == other.edges_;
    }

private:
    int p_ = 0;
    std::set<std::pair<NodeId, NodeId>> edges_;
    std::vector<std::vector<NodeId>> adj_;
};

struct GraphComponent {
    NodeSet nodes;
    NodeSet candidates;  // candidate nodes contained in this component
};

// Candidate / participant / update-set decomposition used by the EM refit.
// participants = update_set \ candidates; components partition update_set.
struct NodePartition {
    NodeSet candidates;
    NodeSet participants;
    NodeSet update_set;
    std::vector<GraphComponent> components;
};

// One-step neighborhood closure: the input set plus everything adjacent to it.
// N(S) contains S, so N(N(C)) contains C.
NodeSet neighbors(const GraphSpec& graph, const NodeSet& nodes);
NodeSet neighbors(const EdgeSetEstimate& graph, const NodeSet& nodes);

// Update set U = N(N(C)) on the estimated graph, participants U \ C, and the
// connected components of the subgraph induced by U.
NodePartition update_partition(const EdgeSetEstimate& edges, const NodeSet& candidates);

struct EdgeMetrics {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    double tpr() const { return tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0; }
    double fpr() const { return fp + tn > 0 ? double(fp) / double(fp + tn) : 0.0; }
    double tnr() const { return fp + tn > 0 ? double(tn) / double(fp + tn) : 0.0; }
    double fnr() const { return tp + fn > 0 ? double(fn) / double(tp + fn) : 0.0; }
};

// Confusion counts over unordered node pairs with at least one endpoint in
// node_class, comparing the estimate against the true edge set.
EdgeMetrics edge_metrics(const EdgeSetEstimate& estimate, const GraphSpec& truth,
                         const NodeSet& node_class);

}  // namespace isingmis
