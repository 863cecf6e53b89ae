#include "doctest.h"

#include <sstream>

#include "isingmis/io.hpp"

using namespace isingmis;

TEST_CASE("graph JSON round trip") {
    const GraphSpec g(4, {{0, 1, 0.5}, {1, 2, -0.25}, {0, 3, 1.5}});
    const GraphSpec back = graph_from_json(graph_to_json(g));
    CHECK(back.node_count() == 4);
    REQUIRE(back.edges().size() == 3);
    CHECK(back.weight(1, 2) == doctest::Approx(-0.25));
    CHECK(back.weight(0, 3) == doctest::Approx(1.5));
}

TEST_CASE("edge set JSON round trip") {
    EdgeSetEstimate e(5);
    e.add_edge(0, 4);
    e.add_edge(2, 1);
    const EdgeSetEstimate back = edge_set_from_json(edge_set_to_json(e));
    CHECK(back == e);
}

TEST_CASE("law JSON round trip") {
    const MisclassLaw per_node = MisclassLaw::per_node({0.1, 0.0, 0.8});
    const MisclassLaw pn_back = law_from_json(law_to_json(per_node));
    CHECK(pn_back.mode() == MisclassLaw::Mode::PerNode);
    CHECK(pn_back.values() == per_node.values());

    const MisclassLaw per_cell = MisclassLaw::per_cell(2, 3, {0, 0.5, 0, 1, 0.25, 0});
    const MisclassLaw pc_back = law_from_json(law_to_json(per_cell));
    CHECK(pc_back.mode() == MisclassLaw::Mode::PerCell);
    CHECK(pc_back.n() == 2);
    CHECK(pc_back.gamma(1, 1) == doctest::Approx(0.25));

    CHECK_THROWS(law_from_json("{\"mode\":\"banana\",\"gammas\":[]}"));
}

TEST_CASE("spin CSV round trip") {
    SpinMatrix data(3, 4);
    data.set(0, 0, -1);
    data.set(1, 2, -1);
    data.set(2, 3, -1);
    std::stringstream ss;
    write_spin_csv(data, ss);
    const SpinMatrix back = read_spin_csv(ss);
    CHECK(back == data);

    std::stringstream bad("a,b\n1,2\n");
    CHECK_THROWS(read_spin_csv(bad));
    std::stringstream ragged("a,b\n1,-1\n1\n");
    CHECK_THROWS(read_spin_csv(ragged));
}

TEST_CASE("rwl fit JSON round trip") {
    RwlFit fit;
    fit.lambda = 0.125;
    fit.aggregation = Aggregation::Or;
    fit.neighborhoods = {{0, {0.0, 0.5, 0.0}}, {1, {0.5, 0.0, -0.1}}, {2, {0.0, -0.1, 0.0}}};
    fit.edge_set = EdgeSetEstimate(3, {{0, 1}, {1, 2}});
    fit.diagnostics = {{0, -0.5, 1e-8, 12, true}, {1, -0.4, 2e-8, 9, true}, {2, -0.6, 3e-8, 7, true}};
    const RwlFit back = rwl_fit_from_json(rwl_fit_to_json(fit));
    CHECK(back.lambda == doctest::Approx(0.125));
    CHECK(back.aggregation == Aggregation::Or);
    CHECK(back.edge_set == fit.edge_set);
    REQUIRE(back.neighborhoods.size() == 3);
    CHECK(back.neighborhoods[1].coefficients[2] == doctest::Approx(-0.1));
    REQUIRE(back.diagnostics.size() == 3);
    CHECK(back.diagnostics[1].sweeps == 9);
}

TEST_CASE("scenario JSON parsing") {
    const std::string text = R"({
        "graph": "figure1",
        "n": 60,
        "replications": 10,
        "law": {"kind": "halfObservations", "withinProb": 0.6},
        "estimators": ["RWL", {"kind": "RWL_EM", "iterations": 3}],
        "seed": 99
    })";
    const ScenarioConfig cfg = scenario_from_json(text);
    CHECK(cfg.graph.node_count() == 12);
    CHECK(cfg.candidates == figure1_candidates());
    CHECK(cfg.n == 60);
    CHECK(cfg.law.within_prob == doctest::Approx(0.6));
    REQUIRE(cfg.estimators.size() == 2);
    CHECK(cfg.estimators[0].label() == "RWL");
    CHECK(cfg.estimators[1].label() == "RWL_EM3");
    CHECK(cfg.seed.value == 99);

    // Echo and reparse.
    const ScenarioConfig back = scenario_from_json(scenario_to_json(cfg));
    CHECK(back.graph.node_count() == 12);
    CHECK(back.candidates == cfg.candidates);
    CHECK(back.estimators.size() == cfg.estimators.size());

    CHECK_THROWS(scenario_from_json("{"));
    CHECK_THROWS(scenario_from_json(R"({"graph":"figure1","n":10,"replications":1,
        "law":{"kind":"nope"},"estimators":["RWL"]})"));
}

TEST_CASE("records JSON round trip without loss") {
    std::vector<MetricsRecord> records{
        {"RWL", 0.125, 0, "candidate", 3, 1, 20, 2},
        {"RWL_EM1", 0.0625, 4, "participant", 5, 0, 30, 1},
    };
    const auto back = records_from_json(records_to_json(records));
    REQUIRE(back.size() == 2);
    CHECK(back[0].estimator == "RWL");
    CHECK(back[0].lambda == 0.125);
    CHECK(back[0].tp == 3);
    CHECK(back[1].node_class == "participant");
    CHECK(back[1].replication == 4);
    CHECK(back[1].fn == 1);
}
