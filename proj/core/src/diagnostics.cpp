#include "isingmis/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isingmis/detail/math.hpp"
#include "isingmis/ising.hpp"

namespace isingmis {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_inputs(const GraphSpec& graph, const MisclassLaw& law, NodeId r, const char* what) {
    if (law.mode() != MisclassLaw::Mode::PerNode) {
        throw std::invalid_argument(std::string(what) + ": requires a per-node law");
    }
    if (law.p() != graph.node_count()) {
        throw std::invalid_argument(std::string(what) + ": law dimension != p");
    }
    if (r < 0 || r >= graph.node_count()) {
        throw std::out_of_range(std::string(what) + ": node out of range");
    }
}

// Enumerates the observed distribution once and folds a per-state accumulator.
template <typename Fn>
void for_each_observed_state(const GraphSpec& graph, const MisclassLaw& law, Fn&& fn) {
    const int p = graph.node_count();
    const std::vector<double> table = mising_log_table(graph, law.values());
    std::vector<std::int8_t> x(static_cast<std::size_t>(p));
    for (std::size_t m = 0; m < table.size(); ++m) {
        state_from_index(m, x);
        fn(x, std::exp(table[m]));
    }
}

double node_field(const GraphSpec& graph, NodeId r, std::span<const std::int8_t> x) {
    double field = 0.0;
    for (NodeId t : graph.neighbors_of(r)) {
        field += graph.weight(r, t) * static_cast<double>(x[static_cast<std::size_t>(t)]);
    }
    return field;
}

}  // namespace

std::vector<double> misclassified_score(const GraphSpec& graph, const MisclassLaw& law, NodeId r) {
    check_inputs(graph, law, r, "misclassified_score");
    const int p = graph.node_count();
    std::vector<double> score(static_cast<std::size_t>(p - 1), 0.0);
    for_each_observed_state(graph, law, [&](std::span<const std::int8_t> x, double prob) {
        const double resid = detail::sigmoid(2.0 * node_field(graph, r, x)) -
                             (x[static_cast<std::size_t>(r)] == 1 ? 1.0 : 0.0);
        int col = 0;
        for (int t = 0; t < p; ++t) {
            if (t == r) continue;
            score[static_cast<std::size_t>(col)] +=
                prob * 2.0 * static_cast<double>(x[static_cast<std::size_t>(t)]) * resid;
            ++col;
        }
    });
    return score;
}

detail::Matrix misclassified_information(const GraphSpec& graph, const MisclassLaw& law,
                                         NodeId r) {
    check_inputs(graph, law, r, "misclassified_information");
    const int p = graph.node_count();
    detail::Matrix info(p - 1, p - 1);
    for_each_observed_state(graph, law, [&](std::span<const std::int8_t> x, double prob) {
        const double mu = detail::sigmoid(2.0 * node_field(graph, r, x));
        const double variance = 4.0 * mu * (1.0 - mu);
        std::vector<double> z;
        z.reserve(static_cast<std::size_t>(p - 1));
        for (int t = 0; t < p; ++t) {
            if (t != r) z.push_back(static_cast<double>(x[static_cast<std::size_t>(t)]));
        }
        for (int i = 0; i < p - 1; ++i) {
            for (int j = 0; j < p - 1; ++j) {
                info(i, j) += prob * variance * z[static_cast<std::size_t>(i)] *
                              z[static_cast<std::size_t>(j)];
            }
        }
    });
    return info;
}

DiagnosticsReport check_assumptions(const GraphSpec& graph, const MisclassLaw& law, int n, int d) {
    const int p = graph.node_count();
    check_inputs(graph, law, 0, "check_assumptions");
    if (n < 1) throw std::invalid_argument("check_assumptions: n must be positive");

    DiagnosticsReport report;
    report.n = n;
    report.d = d > 0 ? d : graph.max_degree();

    double worst_incoherence = 0.0;
    bool have_neighbor_node = false;
    bool singular_somewhere = false;
    report.s_max = 0.0;
    report.c_min = std::numeric_limits<double>::infinity();
    report.d_max = 0.0;

    for (NodeId r = 0; r < p; ++r) {
        NodeDiagnostics nd;
        nd.node = r;
        nd.expected_score = misclassified_score(graph, law, r);
        nd.information = misclassified_information(graph, law, r);
        for (double v : nd.expected_score) {
            nd.score_inf_norm = std::max(nd.score_inf_norm, std::abs(v));
        }
        report.s_max = std::max(report.s_max, nd.score_inf_norm);

        // Second moment of the predictors under the observed distribution.
        detail::Matrix second(p - 1, p - 1);
        for_each_observed_state(graph, law, [&](std::span<const std::int8_t> x, double prob) {
            std::vector<double> z;
            z.reserve(static_cast<std::size_t>(p - 1));
            for (int t = 0; t < p; ++t) {
                if (t != r) z.push_back(static_cast<double>(x[static_cast<std::size_t>(t)]));
            }
            for (int i = 0; i < p - 1; ++i) {
                for (int j = 0; j < p - 1; ++j) {
                    second(i, j) += prob * z[static_cast<std::size_t>(i)] *
                                    z[static_cast<std::size_t>(j)];
                }
            }
        });
        const std::vector<double> sm_eigs = detail::jacobi_eigenvalues(second);
        nd.d_max = sm_eigs.empty() ? 0.0 : sm_eigs.back();
        report.d_max = std::max(report.d_max, nd.d_max);

        // Compact column indices of the true neighbors.
        std::vector<int> s_cols;
        std::vector<int> sc_cols;
        int col = 0;
        for (int t = 0; t < p; ++t) {
            if (t == r) continue;
            if (graph.has_edge(r, t)) s_cols.push_back(col);
            else sc_cols.push_back(col);
            ++col;
        }

        if (s_cols.empty()) {
            nd.c_min = kNan;
            nd.incoherence = kNan;
            nd.alpha = kNan;
        } else {
            have_neighbor_node = true;
            detail::Matrix qss = detail::submatrix(nd.information, s_cols, s_cols);
            const std::vector<double> eigs = detail::jacobi_eigenvalues(qss);
            nd.c_min = eigs.front();
            report.c_min = std::min(report.c_min, nd.c_min);

            detail::Matrix qss_inv = qss;
            if (!detail::invert_in_place(qss_inv)) {
                nd.singular_information = true;
                singular_somewhere = true;
                nd.incoherence = kNan;
                nd.alpha = kNan;
            } else if (sc_cols.empty()) {
                nd.incoherence = 0.0;
                nd.alpha = 1.0;
            } else {
                const detail::Matrix qscs = detail::submatrix(nd.information, sc_cols, s_cols);
                nd.incoherence = detail::inf_norm(detail::matmul(qscs, qss_inv));
                nd.alpha = 1.0 - nd.incoherence;
                worst_incoherence = std::max(worst_incoherence, nd.incoherence);
            }
        }
        report.per_node.push_back(std::move(nd));
    }

    if (!have_neighbor_node) {
        // Edgeless truth: the neighborhood conditions are vacuous.
        report.c_min = kNan;
        report.alpha = 1.0;
        report.a1_satisfied = true;
        report.a2_satisfied = true;
        report.a3_bound = std::numeric_limits<double>::infinity();
        report.a3_satisfied = true;
    } else {
        report.alpha = 1.0 - worst_incoherence;
        report.a1_satisfied = !singular_somewhere && report.c_min > 0.0;
        report.a2_satisfied = !singular_somewhere && report.alpha > 0.0;
        if (report.a1_satisfied && report.a2_satisfied && report.d > 0 && report.d_max > 0.0) {
            const double a = report.alpha;
            report.a3_bound = (report.c_min * report.c_min * a * a) /
                              (400.0 * report.d_max * report.d * (2.0 - a) * (2.0 - a));
            report.a3_satisfied = report.s_max <= report.a3_bound;
        } else {
            report.a3_bound = kNan;
            report.a3_satisfied = false;
        }
    }

    if (report.alpha > 0.0) {
        const double a = report.alpha;
        report.lambda_lower_bound =
            (16.0 * (2.0 - a) / a) * (std::sqrt(std::log(double(p)) / double(n)) + report.s_max / 4.0);
        report.lambda_tilde_shift = (4.0 * (2.0 - a) / a) * report.s_max;
    } else {
        report.lambda_lower_bound = kNan;
        report.lambda_tilde_shift = kNan;
    }
    return report;
}

}  // namespace isingmis
