#include "isingmis/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace isingmis {

namespace {

void check_node(NodeId node, int p, const char* what) {
    if (node < 0 || node >= p) {
        throw std::out_of_range(std::string(what) + ": node index " + std::to_string(node) +
                                " outside [0, " + std::to_string(p) + ")");
    }
}

}  // namespace

NodeSet make_node_set(std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

bool node_set_contains(const NodeSet& set, NodeId node) {
    return std::binary_search(set.begin(), set.end(), node);
}

NodeSet node_set_union(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

NodeSet node_set_difference(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

NodeSet node_set_intersection(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

GraphSpec::GraphSpec(int p, std::vector<WeightedEdge> edges) : p_(p) {
    if (p < 0) throw std::invalid_argument("GraphSpec: negative node count");
    adj_.resize(static_cast<std::size_t>(p));
    std::set<std::pair<NodeId, NodeId>> seen;
    edges_.reserve(edges.size());
    for (WeightedEdge e : edges) {
        check_node(e.s, p, "GraphSpec");
        check_node(e.t, p, "GraphSpec");
        if (e.s == e.t) throw std::invalid_argument("GraphSpec: self-loop");
        if (e.s > e.t) std::swap(e.s, e.t);
        if (!std::isfinite(e.weight)) throw std::invalid_argument("GraphSpec: non-finite weight");
        if (e.weight == 0.0) throw std::invalid_argument("GraphSpec: zero-weight edge listed");
        if (!seen.insert({e.s, e.t}).second) {
            throw std::invalid_argument("GraphSpec: duplicate edge");
        }
        edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::pair(a.s, a.t) < std::pair(b.s, b.t);
    });
    for (const WeightedEdge& e : edges_) {
        adj_[static_cast<std::size_t>(e.s)].push_back(e.t);
        adj_[static_cast<std::size_t>(e.t)].push_back(e.s);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

const std::vector<NodeId>& GraphSpec::neighbors_of(NodeId r) const {
    check_node(r, p_, "GraphSpec::neighbors_of");
    return adj_[static_cast<std::size_t>(r)];
}

bool GraphSpec::has_edge(NodeId s, NodeId t) const {
    return weight(s, t) != 0.0;
}

double GraphSpec::weight(NodeId s, NodeId t) const {
    check_node(s, p_, "GraphSpec::weight");
    check_node(t, p_, "GraphSpec::weight");
    if (s > t) std::swap(s, t);
    for (const WeightedEdge& e : edges_) {
        if (e.s == s && e.t == t) return e.weight;
    }
    return 0.0;
}

int GraphSpec::max_degree() const {
    std::size_t d = 0;
    for (const auto& nbrs : adj_) d = std::max(d, nbrs.size());
    return static_cast<int>(d);
}

EdgeSetEstimate::EdgeSetEstimate(int p) : p_(p) {
    if (p < 0) throw std::invalid_argument("EdgeSetEstimate: negative node count");
    adj_.resize(static_cast<std::size_t>(p));
}

EdgeSetEstimate::EdgeSetEstimate(int p, const std::vector<std::pair<NodeId, NodeId>>& edges)
    : EdgeSetEstimate(p) {
    for (const auto& [s, t] : edges) add_edge(s, t);
}

void EdgeSetEstimate::add_edge(NodeId s, NodeId t) {
    check_node(s, p_, "EdgeSetEstimate::add_edge");
    check_node(t, p_, "EdgeSetEstimate::add_edge");
    if (s == t) throw std::invalid_argument("EdgeSetEstimate: self-loop");
    if (s > t) std::swap(s, t);
    if (edges_.insert({s, t}).second) {
        auto& as = adj_[static_cast<std::size_t>(s)];
        auto& at = adj_[static_cast<std::size_t>(t)];
        as.insert(std::lower_bound(as.begin(), as.end(), t), t);
        at.insert(std::lower_bound(at.begin(), at.end(), s), s);
    }
}

bool EdgeSetEstimate::has_edge(NodeId s, NodeId t) const {
    check_node(s, p_, "EdgeSetEstimate::has_edge");
    check_node(t, p_, "EdgeSetEstimate::has_edge");
    if (s > t) std::swap(s, t);
    return edges_.count({s, t}) > 0;
}

namespace {

NodeSet closure_step(const std::vector<std::vector<NodeId>>& adj, int p, const NodeSet& nodes) {
    std::vector<char> in(static_cast<std::size_t>(p), 0);
    for (NodeId v : nodes) {
        check_node(v, p, "neighbors");
        in[static_cast<std::size_t>(v)] = 1;
    }
    for (NodeId v : nodes) {
        for (NodeId w : adj[static_cast<std::size_t>(v)]) in[static_cast<std::size_t>(w)] = 1;
    }
    NodeSet out;
    for (NodeId v = 0; v < p; ++v) {
        if (in[static_cast<std::size_t>(v)]) out.push_back(v);
    }
    return out;
}

}  // namespace

NodeSet neighbors(const GraphSpec& graph, const NodeSet& nodes) {
    return closure_step(graph.adjacency(), graph.node_count(), nodes);
}

NodeSet neighbors(const EdgeSetEstimate& graph, const NodeSet& nodes) {
    return closure_step(graph.adjacency(), graph.node_count(), nodes);
}

NodePartition update_partition(const EdgeSetEstimate& edges, const NodeSet& candidates) {
    const int p = edges.node_count();
    for (NodeId v : candidates) check_node(v, p, "update_partition");

    NodePartition part;
    part.candidates = candidates;
    part.update_set = neighbors(edges, neighbors(edges, candidates));
    part.participants = node_set_difference(part.update_set, part.candidates);

    // Connected components of the subgraph induced by U, by traversal.
    std::vector<char> in_u(static_cast<std::size_t>(p), 0);
    for (NodeId v : part.update_set) in_u[static_cast<std::size_t>(v)] = 1;
    std::vector<char> visited(static_cast<std::size_t>(p), 0);
    for (NodeId start : part.update_set) {
        if (visited[static_cast<std::size_t>(start)]) continue;
        GraphComponent comp;
        std::vector<NodeId> stack{start};
        visited[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            comp.nodes.push_back(v);
            for (NodeId w : edges.adjacency()[static_cast<std::size_t>(v)]) {
                if (in_u[static_cast<std::size_t>(w)] && !visited[static_cast<std::size_t>(w)]) {
                    visited[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.nodes.begin(), comp.nodes.end());
        comp.candidates = node_set_intersection(comp.nodes, part.candidates);
        part.components.push_back(std::move(comp));
    }
    return part;
}

EdgeMetrics edge_metrics(const EdgeSetEstimate& estimate, const GraphSpec& truth,
                         const NodeSet& node_class) {
    if (estimate.node_count() != truth.node_count()) {
        throw std::invalid_argument("edge_metrics: node counts differ");
    }
    const int p = truth.node_count();
    for (NodeId v : node_class) check_node(v, p, "edge_metrics");

    EdgeMetrics m;
    for (NodeId s = 0; s < p; ++s) {
        for (NodeId t = s + 1; t < p; ++t) {
            if (!node_set_contains(node_class, s) && !node_set_contains(node_class, t)) continue;
            const bool truth_edge = truth.has_edge(s, t);
            const bool est_edge = estimate.has_edge(s, t);
            if (truth_edge && est_edge) ++m.tp;
            else if (truth_edge && !est_edge) ++m.fn;
            else if (!truth_edge && est_edge) ++m.fp;
            else ++m.tn;
        }
    }
    return m;
}

}  // namespace isingmis
