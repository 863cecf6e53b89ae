#pragma once

#include <span>
#include <vector>

#include "isingmis/graph.hpp"
#include "isingmis/spin.hpp"

namespace isingmis {

// Exact evaluation and exact sampling enumerate all 2^p states; 2^20 caps the
// table at ~1M entries, matching the largest network handled exactly.
inline constexpr int kExactLimit = 20;

// Bit-exact state layout shared by all enumeration code: node 0 is the least
// significant bit, bit 0 encodes spin -1 and bit 1 encodes spin +1.
std::size_t state_index(std::span<const std::int8_t> x);
void state_from_index(std::size_t index, std::span<std::int8_t> out);

// Log-probabilities of all 2^p states under Ising(G, theta), normalized.
std::vector<double> ising_log_table(const GraphSpec& graph);
double ising_logpmf(const GraphSpec& graph, std::span<const std::int8_t> x);

// Log-probabilities of the observed (misclassified) states: the Ising table
// pushed through the independent per-node flip channel, O(p * 2^p).
std::vector<double> mising_log_table(const GraphSpec& graph,
                                     const std::vector<double>& node_gammas);
// law must be per-node.
double mising_logpmf(const GraphSpec& graph, const MisclassLaw& law,
                     std::span<const std::int8_t> x_tilde);

enum class SampleMethod { Exact, Gibbs };

// Sweep counts: one sweep updates every site once.
struct GibbsOptions {
    int burn_in_sweeps = 1000;
    int thin_sweeps = 10;
};

SpinMatrix sample_ising(const GraphSpec& graph, int n, SampleMethod method, RngSeed seed,
                        const GibbsOptions& gibbs = {});

// Flips every entry independently with its probability from the law.
SpinMatrix apply_misclassification(const SpinMatrix& data, const MisclassLaw& law, RngSeed seed);

}  // namespace isingmis
