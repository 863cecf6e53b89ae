#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace isingmis {

struct RngSeed {
    std::uint64_t value = 0;
};

// Replication k of a Monte-Carlo run uses seed.value ^ k. Keep this rule in
// sync with run_scenario so split runs reproduce a full run exactly.
inline RngSeed replication_seed(RngSeed base, std::uint64_t replication) {
    return RngSeed{base.value ^ replication};
}

// Deterministic generator; all draws go through explicit reductions so that
// streams do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [0, bound) without modulo bias.
    std::uint64_t uniform_index(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    std::int8_t fair_spin() { return uniform() < 0.5 ? std::int8_t{-1} : std::int8_t{1}; }

private:
    std::mt19937_64 engine_;
};

// n observations of p spins, each entry -1 or +1. Row-major storage.
class SpinMatrix {
public:
    SpinMatrix() = default;
    SpinMatrix(int n, int p);
    static SpinMatrix from_values(int n, int p, std::vector<std::int8_t> values);

    int n() const { return n_; }
    int p() const { return p_; }

    std::int8_t operator()(int obs, int node) const {
        return values_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(p_) +
                       static_cast<std::size_t>(node)];
    }
    void set(int obs, int node, std::int8_t value);
    std::span<const std::int8_t> row(int obs) const {
        return {values_.data() + static_cast<std::size_t>(obs) * static_cast<std::size_t>(p_),
                static_cast<std::size_t>(p_)};
    }

    bool operator==(const SpinMatrix& other) const = default;

private:
    int n_ = 0;
    int p_ = 0;
    std::vector<std::int8_t> values_;
};

// Per-node or per-cell flip probabilities in [0, 1].
class MisclassLaw {
public:
    enum class Mode { PerNode, PerCell };

    MisclassLaw() = default;
    static MisclassLaw per_node(std::vector<double> gammas);
    static MisclassLaw per_cell(int n, int p, std::vector<double> gammas);

    Mode mode() const { return mode_; }
    int p() const { return p_; }
    // Observation count covered by a per-cell law; 0 for per-node laws.
    int n() const { return n_; }

    double gamma(int obs, int node) const {
        return mode_ == Mode::PerNode
                   ? gammas_[static_cast<std::size_t>(node)]
                   : gammas_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(p_) +
                             static_cast<std::size_t>(node)];
    }
    // Per-node summary: the value itself, or the column mean for per-cell laws
    // (used by the candidate-threshold rule).
    double node_gamma(int node) const;

    const std::vector<double>& values() const { return gammas_; }
    bool compatible_with(const SpinMatrix& data) const;

private:
    Mode mode_ = Mode::PerNode;
    int n_ = 0;
    int p_ = 0;
    std::vector<double> gammas_;
};

}  // namespace isingmis
