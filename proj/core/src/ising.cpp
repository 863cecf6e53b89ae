#include "isingmis/ising.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isingmis {

namespace {

void check_exact_limit(int p, const char* what) {
    if (p > kExactLimit) {
        throw std::invalid_argument(std::string(what) + ": p = " + std::to_string(p) +
                                    " exceeds the exact-enumeration limit " +
                                    std::to_string(kExactLimit));
    }
}

void check_spins(std::span<const std::int8_t> x) {
    for (std::int8_t v : x) {
        if (v != -1 && v != 1) throw std::invalid_argument("spin vector entry not in {-1,+1}");
    }
}

double log_sum_exp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace

std::size_t state_index(std::span<const std::int8_t> x) {
    check_spins(x);
    std::size_t idx = 0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (x[s] == 1) idx |= (std::size_t{1} << s);
    }
    return idx;
}

void state_from_index(std::size_t index, std::span<std::int8_t> out) {
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = (index >> s) & 1 ? std::int8_t{1} : std::int8_t{-1};
    }
}

std::vector<double> ising_log_table(const GraphSpec& graph) {
    const int p = graph.node_count();
    check_exact_limit(p, "ising_log_table");
    const std::size_t states = std::size_t{1} << p;
    std::vector<double> logp(states, 0.0);
    for (const WeightedEdge& e : graph.edges()) {
        for (std::size_t m = 0; m < states; ++m) {
            const bool equal = (((m >> e.s) ^ (m >> e.t)) & 1) == 0;
            logp[m] += equal ? e.weight : -e.weight;
        }
    }
    const double log_z = log_sum_exp(logp);
    for (double& v : logp) v -= log_z;
    return logp;
}

double ising_logpmf(const GraphSpec& graph, std::span<const std::int8_t> x) {
    const int p = graph.node_count();
    check_exact_limit(p, "ising_logpmf");
    if (static_cast<int>(x.size()) != p) {
        throw std::invalid_argument("ising_logpmf: spin vector length != p");
    }
    return ising_log_table(graph)[state_index(x)];
}

std::vector<double> mising_log_table(const GraphSpec& graph,
                                     const std::vector<double>& node_gammas) {
    const int p = graph.node_count();
    check_exact_limit(p, "mising_log_table");
    if (static_cast<int>(node_gammas.size()) != p) {
        throw std::invalid_argument("mising_log_table: gamma vector length != p");
    }
    std::vector<double> prob = ising_log_table(graph);
    for (double& v : prob) v = std::exp(v);

    // The flip channel factorizes over nodes, so apply one binary mixing pass
    // per node to the full probability table.
    const std::size_t states = prob.size();
    for (int s = 0; s < p; ++s) {
        const double g = node_gammas[static_cast<std::size_t>(s)];
        if (g == 0.0) continue;
        const std::size_t bit = std::size_t{1} << s;
        for (std::size_t m = 0; m < states; ++m) {
            if (m & bit) continue;
            const double lo = prob[m];
            const double hi = prob[m | bit];
            prob[m] = (1.0 - g) * lo + g * hi;
            prob[m | bit] = g * lo + (1.0 - g) * hi;
        }
    }
    for (double& v : prob) v = std::log(v);
    return prob;
}

double mising_logpmf(const GraphSpec& graph, const MisclassLaw& law,
                     std::span<const std::int8_t> x_tilde) {
    if (law.mode() != MisclassLaw::Mode::PerNode) {
        throw std::invalid_argument("mising_logpmf: requires a per-node law");
    }
    if (law.p() != graph.node_count()) {
        throw std::invalid_argument("mising_logpmf: law dimension != p");
    }
    if (static_cast<int>(x_tilde.size()) != graph.node_count()) {
        throw std::invalid_argument("mising_logpmf: spin vector length != p");
    }
    const std::vector<double> table = mising_log_table(graph, law.values());
    return table[state_index(x_tilde)];
}

namespace {

SpinMatrix sample_exact(const GraphSpec& graph, int n, RngSeed seed) {
    const int p = graph.node_count();
    check_exact_limit(p, "sample_ising(exact)");
    std::vector<double> cdf = ising_log_table(graph);
    double acc = 0.0;
    for (double& v : cdf) {
        acc += std::exp(v);
        v = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    SpinMatrix out(n, p);
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx =
            static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                              static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        for (int s = 0; s < p; ++s) {
            out.set(i, s, (idx >> s) & 1 ? std::int8_t{1} : std::int8_t{-1});
        }
    }
    return out;
}

SpinMatrix sample_gibbs(const GraphSpec& graph, int n, RngSeed seed, const GibbsOptions& opts) {
    if (opts.burn_in_sweeps < 0 || opts.thin_sweeps < 1) {
        throw std::invalid_argument("sample_ising(gibbs): burnIn >= 0 and thin >= 1 required");
    }
    const int p = graph.node_count();
    Rng rng(seed);
    std::vector<std::int8_t> state(static_cast<std::size_t>(p));
    for (auto& v : state) v = rng.fair_spin();

    auto sweep = [&] {
        for (int s = 0; s < p; ++s) {
            double field = 0.0;
            for (NodeId t : graph.neighbors_of(s)) {
                field += graph.weight(s, t) * static_cast<double>(state[static_cast<std::size_t>(t)]);
            }
            // Single-site conditional: P(x_s = +1 | rest) = sigmoid(2 * field).
            const double prob_up = 1.0 / (1.0 + std::exp(-2.0 * field));
            state[static_cast<std::size_t>(s)] = rng.uniform() < prob_up ? 1 : -1;
        }
    };

    for (int k = 0; k < opts.burn_in_sweeps; ++k) sweep();
    SpinMatrix out(n, p);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < opts.thin_sweeps; ++k) sweep();
        for (int s = 0; s < p; ++s) out.set(i, s, state[static_cast<std::size_t>(s)]);
    }
    return out;
}

}  // namespace

SpinMatrix sample_ising(const GraphSpec& graph, int n, SampleMethod method, RngSeed seed,
                        const GibbsOptions& gibbs) {
    if (n < 0) throw std::invalid_argument("sample_ising: negative sample count");
    switch (method) {
        case SampleMethod::Exact:
            return sample_exact(graph, n, seed);
        case SampleMethod::Gibbs:
            return sample_gibbs(graph, n, seed, gibbs);
    }
    throw std::invalid_argument("sample_ising: unknown method");
}

SpinMatrix apply_misclassification(const SpinMatrix& data, const MisclassLaw& law, RngSeed seed) {
    if (!law.compatible_with(data)) {
        throw std::invalid_argument("apply_misclassification: law incompatible with data shape");
    }
    Rng rng(seed);
    SpinMatrix out = data;
    for (int i = 0; i < data.n(); ++i) {
        for (int s = 0; s < data.p(); ++s) {
            const double g = law.gamma(i, s);
            if (rng.uniform() < g) out.set(i, s, static_cast<std::int8_t>(-data(i, s)));
        }
    }
    return out;
}

}  // namespace isingmis
