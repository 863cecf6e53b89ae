#include "doctest.h"

#include <cmath>

#include "isingmis/diagnostics.hpp"
#include "isingmis/ising.hpp"

using namespace isingmis;

namespace {

GraphSpec chain(int p, double weight = 0.5) {
    std::vector<WeightedEdge> edges;
    for (int i = 0; i + 1 < p; ++i) edges.push_back({i, i + 1, weight});
    return GraphSpec(p, std::move(edges));
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Node-r score of one observed row at the true parameters.
std::vector<double> row_score(const GraphSpec& g, NodeId r, std::span<const std::int8_t> x) {
    double field = 0.0;
    for (NodeId t : g.neighbors_of(r)) field += g.weight(r, t) * x[std::size_t(t)];
    const double resid = sigmoid(2.0 * field) - (x[std::size_t(r)] == 1 ? 1.0 : 0.0);
    std::vector<double> score;
    for (int t = 0; t < g.node_count(); ++t) {
        if (t != r) score.push_back(2.0 * x[std::size_t(t)] * resid);
    }
    return score;
}

}  // namespace

TEST_CASE("expected score vanishes without misclassification") {
    const GraphSpec g = chain(4, 0.7);
    const MisclassLaw law = MisclassLaw::per_node({0, 0, 0, 0});
    for (NodeId r = 0; r < 4; ++r) {
        for (double v : misclassified_score(g, law, r)) CHECK(std::abs(v) <= 1e-10);
    }
}

TEST_CASE("expected score vanishes on the empty graph for any law") {
    const GraphSpec g(4, {});
    const MisclassLaw law = MisclassLaw::per_node({0.3, 0.1, 0.5, 0.0});
    for (NodeId r = 0; r < 4; ++r) {
        for (double v : misclassified_score(g, law, r)) CHECK(std::abs(v) <= 1e-10);
    }
}

TEST_CASE("exact score and information match a Monte-Carlo oracle") {
    const GraphSpec g = chain(3);
    const MisclassLaw law = MisclassLaw::per_node({0.1, 0.0, 0.0});
    const int n = 1000000;
    const SpinMatrix clean = sample_ising(g, n, SampleMethod::Exact, RngSeed{1001});
    const SpinMatrix observed = apply_misclassification(clean, law, RngSeed{1002});

    const NodeId r = 1;
    const std::vector<double> exact = misclassified_score(g, law, r);
    std::vector<double> mean(exact.size(), 0.0);
    std::vector<double> sq(exact.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const std::vector<double> s = row_score(g, r, observed.row(i));
        for (std::size_t j = 0; j < s.size(); ++j) {
            mean[j] += s[j];
            sq[j] += s[j] * s[j];
        }
    }
    for (std::size_t j = 0; j < mean.size(); ++j) {
        mean[j] /= n;
        const double var = sq[j] / n - mean[j] * mean[j];
        const double se = std::sqrt(var / n);
        CHECK(std::abs(exact[j] - mean[j]) <= 3.0 * se + 1e-12);
    }

    const detail::Matrix info = misclassified_information(g, law, r);
    for (int a = 0; a < info.rows; ++a) {
        for (int b = a; b < info.cols; ++b) {
            double m1 = 0.0, m2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const auto x = observed.row(i);
                double field = 0.0;
                for (NodeId t : g.neighbors_of(r)) field += g.weight(r, t) * x[std::size_t(t)];
                const double mu = sigmoid(2.0 * field);
                std::vector<double> z;
                for (int t = 0; t < 3; ++t) {
                    if (t != r) z.push_back(double(x[std::size_t(t)]));
                }
                const double v = 4.0 * mu * (1.0 - mu) * z[std::size_t(a)] * z[std::size_t(b)];
                m1 += v;
                m2 += v * v;
            }
            m1 /= n;
            const double se = std::sqrt((m2 / n - m1 * m1) / n);
            CHECK(std::abs(info(a, b) - m1) <= 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("information of independent fair spins is the identity") {
    const GraphSpec g(4, {});
    const MisclassLaw law = MisclassLaw::per_node({0, 0, 0, 0});
    const detail::Matrix info = misclassified_information(g, law, 0);
    for (int i = 0; i < info.rows; ++i) {
        for (int j = 0; j < info.cols; ++j) {
            CHECK(info(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("information matrices are symmetric positive semidefinite") {
    const GraphSpec g(5, {{0, 1, 0.5}, {1, 2, -0.4}, {2, 3, 0.6}, {3, 4, 0.3}, {0, 4, -0.2}});
    const MisclassLaw law = MisclassLaw::per_node({0.1, 0.2, 0.0, 0.3, 0.05});
    for (NodeId r = 0; r < 5; ++r) {
        const detail::Matrix info = misclassified_information(g, law, r);
        for (int i = 0; i < info.rows; ++i) {
            for (int j = 0; j < info.cols; ++j) {
                CHECK(info(i, j) == doctest::Approx(info(j, i)).epsilon(1e-12));
            }
        }
        const std::vector<double> eig = detail::jacobi_eigenvalues(info);
        CHECK(eig.front() >= -1e-12);
    }
}

TEST_CASE("jacobi eigenvalues match characteristic-polynomial roots") {
    detail::Matrix two(2, 2);
    two(0, 0) = 2.0;
    two(1, 1) = 2.0;
    two(0, 1) = two(1, 0) = 1.0;
    const auto e2 = detail::jacobi_eigenvalues(two);
    CHECK(e2[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e2[1] == doctest::Approx(3.0).epsilon(1e-10));

    // Tridiagonal [[2,1,0],[1,2,1],[0,1,2]] has roots 2 - sqrt(2), 2, 2 + sqrt(2).
    detail::Matrix three(3, 3);
    for (int i = 0; i < 3; ++i) three(i, i) = 2.0;
    three(0, 1) = three(1, 0) = three(1, 2) = three(2, 1) = 1.0;
    const auto e3 = detail::jacobi_eigenvalues(three);
    CHECK(e3[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
    CHECK(e3[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(e3[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("s_max shrinks to zero along a vanishing noise path") {
    const GraphSpec g = chain(4, 0.6);
    const std::vector<double> base{0.25, 0.15, 0.2, 0.1};
    double previous = std::numeric_limits<double>::infinity();
    int non_monotone = 0;
    for (int step = 10; step >= 0; --step) {
        std::vector<double> gammas(4);
        for (int s = 0; s < 4; ++s) gammas[std::size_t(s)] = base[std::size_t(s)] * step / 10.0;
        const MisclassLaw law = MisclassLaw::per_node(gammas);
        double s_max = 0.0;
        for (NodeId r = 0; r < 4; ++r) {
            for (double v : misclassified_score(g, law, r)) s_max = std::max(s_max, std::abs(v));
        }
        if (s_max > previous + 1e-12) ++non_monotone;
        previous = s_max;
        if (step == 0) CHECK(s_max <= 1e-10);
    }
    if (non_monotone > 0) {
        MESSAGE("s_max path had ", non_monotone, " non-monotone steps");
    }
}

TEST_CASE("check_assumptions on a hand-checked configuration") {
    const GraphSpec g = chain(4, 0.5);
    const int n = 500;

    SUBCASE("clean data satisfies the misclassification condition") {
        const MisclassLaw law = MisclassLaw::per_node({0, 0, 0, 0});
        const DiagnosticsReport rep = check_assumptions(g, law, n);
        CHECK(rep.s_max <= 1e-10);
        CHECK(rep.a1_satisfied);
        CHECK(rep.a2_satisfied);
        CHECK(rep.a3_satisfied);
        CHECK(rep.d == 2);
        // With s_max = 0 the bound reduces to (16(2-a)/a) sqrt(log p / n).
        const double expected =
            16.0 * (2.0 - rep.alpha) / rep.alpha * std::sqrt(std::log(4.0) / n);
        CHECK(rep.lambda_lower_bound == doctest::Approx(expected).epsilon(1e-12));
        CHECK(rep.lambda_tilde_shift == doctest::Approx(0.0));
    }

    SUBCASE("noisy data: bound formula and lambda shift are consistent") {
        const MisclassLaw law = MisclassLaw::per_node({0.15, 0.05, 0.1, 0.0});
        const DiagnosticsReport rep = check_assumptions(g, law, n);
        CHECK(rep.s_max > 0.0);
        const double a = rep.alpha;
        const double bound = rep.c_min * rep.c_min * a * a /
                             (400.0 * rep.d_max * rep.d * (2.0 - a) * (2.0 - a));
        CHECK(rep.a3_bound == doctest::Approx(bound).epsilon(1e-12));
        CHECK(rep.a3_satisfied == (rep.s_max <= bound));
        const double lb = 16.0 * (2.0 - a) / a * (std::sqrt(std::log(4.0) / n) + rep.s_max / 4.0);
        CHECK(rep.lambda_lower_bound == doctest::Approx(lb).epsilon(1e-12));
        // lambda_tilde(lambda) <= lambda, and positive at the theorem bound.
        CHECK(rep.lambda_tilde_shift >= 0.0);
        CHECK(rep.lambda_lower_bound - rep.lambda_tilde_shift > 0.0);

        // Per-node quantities populate the report.
        REQUIRE(rep.per_node.size() == 4);
        for (const NodeDiagnostics& nd : rep.per_node) {
            CHECK(std::isfinite(nd.score_inf_norm));
            CHECK(nd.c_min > 0.0);
        }
    }

    SUBCASE("edgeless truth is vacuous") {
        const GraphSpec empty(3, {});
        const MisclassLaw law = MisclassLaw::per_node({0.2, 0.2, 0.2});
        const DiagnosticsReport rep = check_assumptions(empty, law, 100);
        CHECK(rep.a3_satisfied);
        CHECK(rep.s_max <= 1e-10);
    }
}

TEST_CASE("per-cell laws are rejected by the exact diagnostics") {
    const GraphSpec g = chain(3);
    const MisclassLaw law = MisclassLaw::per_cell(2, 3, std::vector<double>(6, 0.1));
    CHECK_THROWS_AS(misclassified_score(g, law, 0), std::invalid_argument);
    CHECK_THROWS_AS(check_assumptions(g, law, 100), std::invalid_argument);
}
