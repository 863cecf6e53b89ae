// Command-line interface: sampling, misclassification, nodewise selection,
// EM edge refinement, theory diagnostics, and the Monte-Carlo harness.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "isingmis/io.hpp"

namespace {

using namespace isingmis;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        values.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return values;
}

// "3,7,11" or "auto:q", thresholding the law's per-node rate (mean over
// observations for per-cell laws, or the max when requested).
NodeSet parse_candidates(const std::string& text, const MisclassLaw& law, bool use_max) {
    if (text.rfind("auto:", 0) == 0) {
        const double threshold = std::stod(text.substr(5));
        NodeSet out;
        for (int s = 0; s < law.p(); ++s) {
            double stat = law.node_gamma(s);
            if (use_max && law.mode() == MisclassLaw::Mode::PerCell) {
                stat = 0.0;
                for (int i = 0; i < law.n(); ++i) stat = std::max(stat, law.gamma(i, s));
            }
            if (stat > threshold) out.push_back(s);
        }
        return out;
    }
    NodeSet out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(std::stoi(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return make_node_set(out);
}

int resolve_threads(int flag_value) {
    if (const char* env = std::getenv("ISINGMIS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (flag_value > 0) return flag_value;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int run_sample(const std::string& graph_path, int n, const std::string& method,
               std::uint64_t seed, int burn_in, int thin, const std::string& out) {
    const GraphSpec graph = graph_from_json(read_text_file(graph_path));
    GibbsOptions gibbs;
    gibbs.burn_in_sweeps = burn_in;
    gibbs.thin_sweeps = thin;
    const SampleMethod m = method == "gibbs" ? SampleMethod::Gibbs : SampleMethod::Exact;
    write_spin_csv(sample_ising(graph, n, m, RngSeed{seed}, gibbs), std::filesystem::path(out));
    return 0;
}

int run_perturb(const std::string& data_path, const std::string& law_path, std::uint64_t seed,
                const std::string& out) {
    const SpinMatrix data = read_spin_csv(std::filesystem::path(data_path));
    const MisclassLaw law = law_from_json(read_text_file(law_path));
    write_spin_csv(apply_misclassification(data, law, RngSeed{seed}), std::filesystem::path(out));
    return 0;
}

int run_fit(const std::string& data_path, double lambda, const std::string& grid_text,
            const std::string& aggregation, const std::string& weights_path,
            const std::string& candidates_text, const std::string& out, bool verbose) {
    const SpinMatrix data = read_spin_csv(std::filesystem::path(data_path));
    RwlOptions opts;
    opts.aggregation = aggregation == "or" ? Aggregation::Or : Aggregation::And;

    std::optional<MisclassLaw> law;
    NodeSet candidates;
    if (!weights_path.empty()) {
        law = law_from_json(read_text_file(weights_path));
        if (candidates_text.empty()) {
            throw std::runtime_error("fit: --weights requires --candidates");
        }
        candidates = parse_candidates(candidates_text, *law, false);
    }

    auto fit_one = [&](double l) {
        return law ? rwl_fit_weighted(data, l, *law, candidates, opts) : rwl_fit(data, l, opts);
    };
    auto report = [&](const RwlFit& f) {
        if (!verbose) return;
        for (const NodeFitDiagnostics& d : f.diagnostics) {
            std::cerr << "node " << d.node << ": objective " << d.objective << ", kkt "
                      << d.kkt_residual << ", sweeps " << d.sweeps
                      << (d.converged ? "" : " (not converged)") << "\n";
        }
    };

    std::string payload;
    if (grid_text.empty()) {
        const RwlFit fit = fit_one(lambda);
        report(fit);
        payload = rwl_fit_to_json(fit);
    } else {
        std::vector<double> grid = parse_double_list(grid_text);
        std::sort(grid.begin(), grid.end(), std::greater<>());
        payload = "[\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const RwlFit fit = fit_one(grid[i]);
            report(fit);
            payload += rwl_fit_to_json(fit);
            if (i + 1 < grid.size()) payload += ",";
            payload += "\n";
        }
        payload += "]\n";
    }
    write_text_file(std::filesystem::path(out), payload);
    return 0;
}

int run_em(const std::string& data_path, const std::string& init_path,
           const std::string& law_path, const std::string& candidates_text, double lambda,
           int iters, bool audit, bool candidate_stat_max, const std::string& out) {
    const SpinMatrix data = read_spin_csv(std::filesystem::path(data_path));
    const RwlFit initial = rwl_fit_from_json(read_text_file(init_path));
    const MisclassLaw law = law_from_json(read_text_file(law_path));
    const NodeSet candidates = parse_candidates(candidates_text, law, candidate_stat_max);
    EMOptions opts;
    opts.audit_likelihood = audit;
    const EMResult result = em_update(initial, data, law, candidates, lambda, iters, opts);
    write_text_file(std::filesystem::path(out), em_result_to_json(result));
    if (audit) {
        const auto& rows = result.audit.per_iteration;
        for (std::size_t k = 1; k < rows.size(); ++k) {
            for (std::size_t i = 0; i < rows[k].size(); ++i) {
                if (rows[k][i] < rows[k - 1][i] - 1e-12) {
                    std::cerr << "likelihood audit: node " << result.audit.update_set[i]
                              << " decreased at update " << k << " (" << rows[k - 1][i] << " -> "
                              << rows[k][i] << ")\n";
                }
            }
        }
    }
    return 0;
}

int run_diagnose(const std::string& graph_path, const std::string& law_path, int n, int d,
                 const std::string& out) {
    const GraphSpec graph = graph_from_json(read_text_file(graph_path));
    const MisclassLaw law = law_from_json(read_text_file(law_path));
    const DiagnosticsReport report = check_assumptions(graph, law, n, d);
    write_text_file(std::filesystem::path(out), diagnostics_to_json(report));
    return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_dir, int threads,
                 const std::string& format) {
    const ScenarioConfig config = scenario_from_json(read_text_file(config_path));
    const ScenarioResult result = run_scenario(config, resolve_threads(threads));
    emit_outputs(result, format == "json" ? OutputFormat::Json : OutputFormat::Csv,
                 std::filesystem::path(out_dir));
    if (result.failed_replications > 0) {
        std::cerr << result.failed_replications << " replication(s) failed and were excluded\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ising structure learning under misclassified states"};
    app.require_subcommand(1);

    std::string graph_path, data_path, law_path, init_path, config_path;
    std::string out_path, out_dir, method = "exact", aggregation = "and", format = "csv";
    std::string grid_text, weights_path, candidates_text;
    double lambda = 0.1;
    int n = 100, burn_in = 1000, thin = 10, iters = 1, diag_n = 100, diag_d = 0, threads = 0;
    std::uint64_t seed = 0;
    bool verbose = false, audit = false, candidate_stat_max = false;

    auto* sample = app.add_subcommand("sample", "Draw observations from Ising(G, theta)");
    sample->add_option("--graph", graph_path, "Graph JSON file")->required();
    sample->add_option("--n", n, "Number of observations")->required();
    sample->add_option("--method", method, "exact | gibbs")
        ->check(CLI::IsMember({"exact", "gibbs"}));
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--burn-in", burn_in, "Gibbs burn-in sweeps");
    sample->add_option("--thin", thin, "Gibbs thinning (sweeps per draw)");
    sample->add_option("--out", out_path, "Output CSV")->required();

    auto* perturb = app.add_subcommand("perturb", "Push data through the misclassification channel");
    perturb->add_option("--data", data_path, "Input spin CSV")->required();
    perturb->add_option("--law", law_path, "Misclassification law JSON")->required();
    perturb->add_option("--seed", seed, "RNG seed");
    perturb->add_option("--out", out_path, "Output CSV")->required();

    auto* fit = app.add_subcommand("fit", "Nodewise L1-regularized edge selection");
    fit->add_option("--data", data_path, "Input spin CSV")->required();
    fit->add_option("--lambda", lambda, "Regularization strength");
    fit->add_option("--lambda-grid", grid_text, "Comma-separated grid");
    fit->add_option("--aggregation", aggregation, "and | or")
        ->check(CLI::IsMember({"and", "or"}));
    fit->add_option("--weights", weights_path, "Law JSON enabling the channel-weighted expansion");
    fit->add_option("--candidates", candidates_text,
                    "Candidates for --weights (list `3,7,11` or `auto:q`)");
    fit->add_flag("--verbose", verbose, "Print per-node solver diagnostics");
    fit->add_option("--out", out_path, "Output JSON")->required();

    auto* em = app.add_subcommand("em", "EM edge refinement with known misclassification");
    em->add_option("--data", data_path, "Input spin CSV")->required();
    em->add_option("--init-fit", init_path, "Initial fit JSON (from `fit`)")->required();
    em->add_option("--law", law_path, "Misclassification law JSON")->required();
    em->add_option("--candidates", candidates_text, "List `3,7,11` or `auto:q`")->required();
    em->add_option("--lambda", lambda, "M-step regularization")->required();
    em->add_option("--iters", iters, "Number of EM updates");
    em->add_flag("--audit-likelihood", audit, "Record penalized likelihoods per update");
    em->add_flag("--candidate-stat-max", candidate_stat_max,
                 "auto:q thresholds the per-node max rather than the mean (per-cell laws)");
    em->add_option("--out", out_path, "Output JSON")->required();

    auto* diagnose = app.add_subcommand("diagnose", "Score/information diagnostics and bounds");
    diagnose->add_option("--graph", graph_path, "Graph JSON file")->required();
    diagnose->add_option("--law", law_path, "Per-node law JSON")->required();
    diagnose->add_option("--n", diag_n, "Sample size for the lambda bound")->required();
    diagnose->add_option("--d", diag_d, "Max degree override (0 = from graph)");
    diagnose->add_option("--out", out_path, "Output JSON")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo scenario harness");
    simulate->add_option("--config", config_path, "Scenario JSON")->required();
    simulate->add_option("--out-dir", out_dir, "Output directory")->required();
    simulate->add_option("--threads", threads, "Worker threads (ISINGMIS_THREADS overrides)");
    simulate->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) {
            return run_sample(graph_path, n, method, seed, burn_in, thin, out_path);
        }
        if (perturb->parsed()) return run_perturb(data_path, law_path, seed, out_path);
        if (fit->parsed()) {
            return run_fit(data_path, lambda, grid_text, aggregation, weights_path,
                           candidates_text, out_path, verbose);
        }
        if (em->parsed()) {
            return run_em(data_path, init_path, law_path, candidates_text, lambda, iters, audit,
                          candidate_stat_max, out_path);
        }
        if (diagnose->parsed()) return run_diagnose(graph_path, law_path, diag_n, diag_d, out_path);
        if (simulate->parsed()) return run_simulate(config_path, out_dir, threads, format);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
