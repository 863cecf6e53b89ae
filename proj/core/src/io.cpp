#include "isingmis/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace isingmis {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(std::string(what) + ": invalid JSON");
    return j;
}

json graph_json(const GraphSpec& graph) {
    json edges = json::array();
    for (const WeightedEdge& e : graph.edges()) {
        edges.push_back(json::array({e.s, e.t, e.weight}));
    }
    return json{{"p", graph.node_count()}, {"edges", std::move(edges)}};
}

GraphSpec graph_from(const json& j) {
    std::vector<WeightedEdge> edges;
    for (const json& e : j.at("edges")) {
        edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>()});
    }
    return GraphSpec(j.at("p").get<int>(), std::move(edges));
}

json edge_set_json(const EdgeSetEstimate& edges) {
    json arr = json::array();
    for (const auto& [s, t] : edges.edges()) arr.push_back(json::array({s, t}));
    return json{{"p", edges.node_count()}, {"edges", std::move(arr)}};
}

EdgeSetEstimate edge_set_from(const json& j) {
    EdgeSetEstimate edges(j.at("p").get<int>());
    for (const json& e : j.at("edges")) {
        edges.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
    return edges;
}

json law_json(const MisclassLaw& law) {
    json j;
    if (law.mode() == MisclassLaw::Mode::PerNode) {
        j["mode"] = "perNode";
        j["gammas"] = law.values();
    } else {
        j["mode"] = "perCell";
        json rows = json::array();
        for (int i = 0; i < law.n(); ++i) {
            json row = json::array();
            for (int s = 0; s < law.p(); ++s) row.push_back(law.gamma(i, s));
            rows.push_back(std::move(row));
        }
        j["gammas"] = std::move(rows);
    }
    return j;
}

MisclassLaw law_from(const json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "perNode") {
        return MisclassLaw::per_node(j.at("gammas").get<std::vector<double>>());
    }
    if (mode == "perCell") {
        const json& rows = j.at("gammas");
        const int n = static_cast<int>(rows.size());
        const int p = n > 0 ? static_cast<int>(rows.at(0).size()) : 0;
        std::vector<double> cells;
        cells.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(p));
        for (const json& row : rows) {
            if (static_cast<int>(row.size()) != p) {
                throw std::runtime_error("law_from_json: ragged per-cell rows");
            }
            for (const json& v : row) cells.push_back(v.get<double>());
        }
        return MisclassLaw::per_cell(n, p, std::move(cells));
    }
    throw std::runtime_error("law_from_json: unknown mode '" + mode + "'");
}

json neighborhoods_json(const RwlFit& fit) {
    json hoods = json::array();
    for (const NeighborhoodEstimate& h : fit.neighborhoods) {
        hoods.push_back(json{{"node", h.node}, {"coefficients", h.coefficients}});
    }
    return hoods;
}

json estimator_json(const EstimatorSpec& est) {
    json j{{"kind", ""}};
    switch (est.kind) {
        case EstimatorKind::Rwl: j["kind"] = "RWL"; break;
        case EstimatorKind::RwlWeighted: j["kind"] = "RWL_WEIGHTED"; break;
        case EstimatorKind::RwlEm: j["kind"] = "RWL_EM"; j["iterations"] = est.em_iterations; break;
        case EstimatorKind::WeightedEm:
            j["kind"] = "WEIGHTED_EM";
            j["iterations"] = est.em_iterations;
            break;
    }
    return j;
}

EstimatorSpec estimator_from(const json& j) {
    std::string kind;
    int iterations = 1;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else {
        kind = j.at("kind").get<std::string>();
        iterations = j.value("iterations", 1);
    }
    EstimatorSpec est;
    est.em_iterations = iterations;
    if (kind == "RWL") est.kind = EstimatorKind::Rwl;
    else if (kind == "RWL_WEIGHTED") est.kind = EstimatorKind::RwlWeighted;
    else if (kind == "RWL_EM") est.kind = EstimatorKind::RwlEm;
    else if (kind == "WEIGHTED_EM") est.kind = EstimatorKind::WeightedEm;
    else throw std::runtime_error("scenario_from_json: unknown estimator '" + kind + "'");
    return est;
}

}  // namespace

std::string graph_to_json(const GraphSpec& graph) { return graph_json(graph).dump(2); }

GraphSpec graph_from_json(const std::string& text) {
    return graph_from(parse(text, "graph_from_json"));
}

std::string edge_set_to_json(const EdgeSetEstimate& edges) { return edge_set_json(edges).dump(2); }

EdgeSetEstimate edge_set_from_json(const std::string& text) {
    return edge_set_from(parse(text, "edge_set_from_json"));
}

std::string law_to_json(const MisclassLaw& law) { return law_json(law).dump(2); }

MisclassLaw law_from_json(const std::string& text) {
    return law_from(parse(text, "law_from_json"));
}

void write_spin_csv(const SpinMatrix& data, std::ostream& out) {
    for (int s = 0; s < data.p(); ++s) {
        out << (s > 0 ? "," : "") << "x" << s;
    }
    out << "\n";
    for (int i = 0; i < data.n(); ++i) {
        for (int s = 0; s < data.p(); ++s) {
            out << (s > 0 ? "," : "") << static_cast<int>(data(i, s));
        }
        out << "\n";
    }
}

void write_spin_csv(const SpinMatrix& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_spin_csv: cannot open " + path.string());
    write_spin_csv(data, out);
    if (!out) throw std::runtime_error("write_spin_csv: write failed for " + path.string());
}

SpinMatrix read_spin_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_spin_csv: empty input");
    int p = line.empty() ? 0 : 1;
    for (char c : line) {
        if (c == ',') ++p;
    }
    std::vector<std::int8_t> values;
    int n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        int cols = 0;
        while (std::getline(row, cell, ',')) {
            const int v = std::stoi(cell);
            if (v != -1 && v != 1) {
                throw std::runtime_error("read_spin_csv: entry not in {-1,+1}");
            }
            values.push_back(static_cast<std::int8_t>(v));
            ++cols;
        }
        if (cols != p) throw std::runtime_error("read_spin_csv: ragged row");
        ++n;
    }
    return SpinMatrix::from_values(n, p, std::move(values));
}

SpinMatrix read_spin_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_spin_csv: cannot open " + path.string());
    return read_spin_csv(in);
}

std::string rwl_fit_to_json(const RwlFit& fit) {
    json diags = json::array();
    for (const NodeFitDiagnostics& d : fit.diagnostics) {
        diags.push_back(json{{"node", d.node},
                             {"objective", d.objective},
                             {"kktResidual", d.kkt_residual},
                             {"sweeps", d.sweeps},
                             {"converged", d.converged}});
    }
    json j{{"lambda", fit.lambda},
           {"aggregation", fit.aggregation == Aggregation::And ? "and" : "or"},
           {"neighborhoods", neighborhoods_json(fit)},
           {"edgeSet", edge_set_json(fit.edge_set)},
           {"diagnostics", std::move(diags)}};
    return j.dump(2);
}

RwlFit rwl_fit_from_json(const std::string& text) {
    const json j = parse(text, "rwl_fit_from_json");
    RwlFit fit;
    fit.lambda = j.at("lambda").get<double>();
    fit.aggregation =
        j.at("aggregation").get<std::string>() == "or" ? Aggregation::Or : Aggregation::And;
    for (const json& h : j.at("neighborhoods")) {
        fit.neighborhoods.push_back(
            {h.at("node").get<NodeId>(), h.at("coefficients").get<std::vector<double>>()});
    }
    fit.edge_set = edge_set_from(j.at("edgeSet"));
    if (j.contains("diagnostics")) {
        for (const json& d : j.at("diagnostics")) {
            fit.diagnostics.push_back({d.at("node").get<NodeId>(), d.at("objective").get<double>(),
                                       d.at("kktResidual").get<double>(), d.at("sweeps").get<int>(),
                                       d.at("converged").get<bool>()});
        }
    }
    return fit;
}

std::string em_result_to_json(const EMResult& result) {
    const EMState& st = result.state;
    json coefs = json::array();
    for (NodeId r : st.partition.update_set) {
        coefs.push_back(json{{"node", r},
                             {"theta", st.theta[static_cast<std::size_t>(r)]},
                             {"fixed", st.fixed_theta[static_cast<std::size_t>(r)]}});
    }
    json comps = json::array();
    for (const GraphComponent& c : st.partition.components) {
        comps.push_back(json{{"nodes", c.nodes}, {"candidates", c.candidates}});
    }
    json j{{"lambda", st.lambda},
           {"iterations", st.iteration},
           {"candidates", st.partition.candidates},
           {"participants", st.partition.participants},
           {"updateSet", st.partition.update_set},
           {"components", std::move(comps)},
           {"edgeSet", edge_set_json(result.edge_set)},
           {"coefficients", std::move(coefs)}};
    if (!result.audit.per_iteration.empty()) {
        j["likelihoodAudit"] = result.audit.per_iteration;
    }
    return j.dump(2);
}

std::string diagnostics_to_json(const DiagnosticsReport& report) {
    json per_node = json::array();
    for (const NodeDiagnostics& nd : report.per_node) {
        json info = json::array();
        for (int i = 0; i < nd.information.rows; ++i) {
            json row = json::array();
            for (int j2 = 0; j2 < nd.information.cols; ++j2) row.push_back(nd.information(i, j2));
            info.push_back(std::move(row));
        }
        per_node.push_back(json{{"node", nd.node},
                                {"expectedScore", nd.expected_score},
                                {"information", std::move(info)},
                                {"scoreInfNorm", nd.score_inf_norm},
                                {"cMin", nd.c_min},
                                {"incoherence", nd.incoherence},
                                {"alpha", nd.alpha},
                                {"dMax", nd.d_max},
                                {"singularInformation", nd.singular_information}});
    }
    json j{{"sMax", report.s_max},
           {"cMin", report.c_min},
           {"dMax", report.d_max},
           {"alpha", report.alpha},
           {"a1Satisfied", report.a1_satisfied},
           {"a2Satisfied", report.a2_satisfied},
           {"a3Satisfied", report.a3_satisfied},
           {"a3Bound", report.a3_bound},
           {"n", report.n},
           {"d", report.d},
           {"lambdaLowerBound", report.lambda_lower_bound},
           {"lambdaTildeShift", report.lambda_tilde_shift},
           {"perNode", std::move(per_node)}};
    return j.dump(2);
}

ScenarioConfig scenario_from_json(const std::string& text) {
    const json j = parse(text, "scenario_from_json");
    ScenarioConfig cfg;

    const json& g = j.at("graph");
    bool builtin_figure1 = false;
    bool builtin_fmri = false;
    if (g.is_string() && g.get<std::string>() == "figure1") {
        cfg.graph = build_figure1_network();
        builtin_figure1 = true;
    } else if (g.is_object() && g.contains("fmriLike")) {
        const json& f = g.at("fmriLike");
        cfg.graph = build_fmri_like_network(f.value("p", 20), f.value("shrinkage", 0.5),
                                            RngSeed{f.value("seed", std::uint64_t{20240101})});
        builtin_fmri = true;
    } else {
        cfg.graph = graph_from(g);
    }

    if (j.contains("candidates")) {
        cfg.candidates = make_node_set(j.at("candidates").get<std::vector<NodeId>>());
    } else if (builtin_figure1) {
        cfg.candidates = figure1_candidates();
    } else if (builtin_fmri) {
        cfg.candidates = fmri_like_candidates();
    }
    cfg.candidate_threshold = j.value("candidateThreshold", -1.0);

    cfg.n = j.at("n").get<int>();
    cfg.replications = j.at("replications").get<int>();
    cfg.replication_offset = j.value("replicationOffset", 0);

    const json& law = j.at("law");
    const std::string kind = law.at("kind").get<std::string>();
    if (kind == "perNode") {
        cfg.law.kind = LawScheme::Kind::PerNode;
        cfg.law.per_node = law.at("gammas").get<std::vector<double>>();
    } else if (kind == "halfObservations") {
        cfg.law.kind = LawScheme::Kind::HalfObservations;
        cfg.law.within_prob = law.value("withinProb", 0.6);
        if (law.value("knowledge", std::string("marginal")) == "realized") {
            cfg.law.knowledge = LawScheme::Knowledge::Realized;
        }
        cfg.law.assumed_gamma = law.value("assumedGamma", -1.0);
    } else {
        throw std::runtime_error("scenario_from_json: unknown law kind '" + kind + "'");
    }

    if (j.contains("lambdaGrid")) {
        const json& grid = j.at("lambdaGrid");
        if (grid.is_array()) {
            cfg.lambda_grid = grid.get<std::vector<double>>();
        } else {
            cfg.lambda_grid =
                default_lambda_grid(cfg.graph.node_count(), cfg.n, grid.value("count", 30),
                                    grid.value("lo", 0.01), grid.value("hi", 1.5));
        }
    }

    for (const json& est : j.at("estimators")) cfg.estimators.push_back(estimator_from(est));
    cfg.seed = RngSeed{j.value("seed", std::uint64_t{0})};
    if (j.value("sampling", std::string("exact")) == "gibbs") {
        cfg.sampling = SampleMethod::Gibbs;
    }
    if (j.contains("gibbs")) {
        cfg.gibbs.burn_in_sweeps = j.at("gibbs").value("burnIn", 1000);
        cfg.gibbs.thin_sweeps = j.at("gibbs").value("thin", 10);
    }
    cfg.candidate_limit = j.value("candidateLimit", kDefaultCandidateLimit);
    const std::string attribution = j.value("attribution", std::string("overlapping"));
    if (attribution == "exclusive") cfg.attribution = ClassAttribution::Exclusive;
    else if (attribution == "overlapping") cfg.attribution = ClassAttribution::Overlapping;
    else if (attribution == "perNode") cfg.attribution = ClassAttribution::PerNode;
    else throw std::runtime_error("scenario_from_json: unknown attribution '" + attribution + "'");
    if (j.contains("emInitialLambda")) {
        cfg.em_initial_lambda = j.at("emInitialLambda").get<double>();
    }
    return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json law;
    if (cfg.law.kind == LawScheme::Kind::PerNode) {
        law = json{{"kind", "perNode"}, {"gammas", cfg.law.per_node}};
    } else {
        law = json{{"kind", "halfObservations"},
                   {"withinProb", cfg.law.within_prob},
                   {"knowledge", cfg.law.knowledge == LawScheme::Knowledge::Realized
                                     ? "realized"
                                     : "marginal"},
                   {"assumedGamma", cfg.law.assumed_gamma}};
    }
    json estimators = json::array();
    for (const EstimatorSpec& est : cfg.estimators) estimators.push_back(estimator_json(est));
    json j{{"graph", graph_json(cfg.graph)},
           {"candidates", cfg.candidates},
           {"candidateThreshold", cfg.candidate_threshold},
           {"n", cfg.n},
           {"replications", cfg.replications},
           {"replicationOffset", cfg.replication_offset},
           {"law", std::move(law)},
           {"lambdaGrid", cfg.lambda_grid},
           {"estimators", std::move(estimators)},
           {"seed", cfg.seed.value},
           {"sampling", cfg.sampling == SampleMethod::Gibbs ? "gibbs" : "exact"},
           {"gibbs", json{{"burnIn", cfg.gibbs.burn_in_sweeps}, {"thin", cfg.gibbs.thin_sweeps}}},
           {"candidateLimit", cfg.candidate_limit},
           {"attribution", cfg.attribution == ClassAttribution::Exclusive
                               ? "exclusive"
                               : (cfg.attribution == ClassAttribution::Overlapping ? "overlapping"
                                                                                   : "perNode")}};
    if (cfg.em_initial_lambda) j["emInitialLambda"] = *cfg.em_initial_lambda;
    return j.dump(2);
}

std::string records_to_json(const std::vector<MetricsRecord>& records) {
    json arr = json::array();
    for (const MetricsRecord& r : records) {
        arr.push_back(json{{"estimator", r.estimator},
                           {"lambda", r.lambda},
                           {"replication", r.replication},
                           {"nodeClass", r.node_class},
                           {"tp", r.tp},
                           {"fp", r.fp},
                           {"tn", r.tn},
                           {"fn", r.fn}});
    }
    return arr.dump(2);
}

std::vector<MetricsRecord> records_from_json(const std::string& text) {
    const json arr = parse(text, "records_from_json");
    std::vector<MetricsRecord> records;
    for (const json& r : arr) {
        records.push_back({r.at("estimator").get<std::string>(), r.at("lambda").get<double>(),
                           r.at("replication").get<int>(), r.at("nodeClass").get<std::string>(),
                           r.at("tp").get<long>(), r.at("fp").get<long>(), r.at("tn").get<long>(),
                           r.at("fn").get<long>()});
    }
    return records;
}

std::string curves_to_json(const std::vector<ClassCurve>& curves) {
    json arr = json::array();
    for (const ClassCurve& c : curves) {
        json pts = json::array();
        for (const RocPoint& pt : c.points) {
            pts.push_back(json{{"lambda", pt.lambda}, {"tpr", pt.tpr}, {"fpr", pt.fpr}});
        }
        arr.push_back(json{{"estimator", c.estimator},
                           {"nodeClass", c.node_class},
                           {"auc", c.auc},
                           {"points", std::move(pts)}});
    }
    return arr.dump(2);
}

std::string node_errors_to_json(const std::vector<NodeErrorRate>& rates) {
    json arr = json::array();
    for (const NodeErrorRate& r : rates) {
        arr.push_back(
            json{{"estimator", r.estimator}, {"node", r.node}, {"errorRate", r.error_rate}});
    }
    return arr.dump(2);
}

std::string edge_selection_to_json(const std::vector<EdgeSelectionFrequency>& freq) {
    json arr = json::array();
    for (const EdgeSelectionFrequency& f : freq) {
        arr.push_back(json{{"estimator", f.estimator},
                           {"s", f.s},
                           {"t", f.t},
                           {"trueEdge", f.true_edge},
                           {"frequency", f.frequency}});
    }
    return arr.dump(2);
}

std::string scenario_summary_to_json(const ScenarioResult& result) {
    json j{{"config", json::parse(scenario_to_json(result.config))},
           {"youdenLambda", result.youden_lambda},
           {"auc", result.auc},
           {"failedReplications", result.failed_replications},
           {"failedReplicationIds", result.failed_replication_ids},
           {"failureMessages", result.failure_messages}};
    return j.dump(2);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_text_file: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_text_file: cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write_text_file: write failed for " + path.string());
}

}  // namespace isingmis
