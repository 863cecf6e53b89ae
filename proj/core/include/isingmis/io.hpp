#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "isingmis/diagnostics.hpp"
#include "isingmis/em.hpp"
#include "isingmis/graph.hpp"
#include "isingmis/rwl.hpp"
#include "isingmis/simulate.hpp"
#include "isingmis/spin.hpp"

namespace isingmis {

// Graph files: {"p": int, "edges": [[s, t, weight], ...]}, 0-based indices.
// Edge-set estimates serialize the same way with the weight omitted.
std::string graph_to_json(const GraphSpec& graph);
GraphSpec graph_from_json(const std::string& text);
std::string edge_set_to_json(const EdgeSetEstimate& edges);
EdgeSetEstimate edge_set_from_json(const std::string& text);

// {"mode": "perNode" | "perCell", "gammas": [...] or [[...], ...]}.
std::string law_to_json(const MisclassLaw& law);
MisclassLaw law_from_json(const std::string& text);

// CSV with a header row of node names and -1/+1 entries.
void write_spin_csv(const SpinMatrix& data, std::ostream& out);
void write_spin_csv(const SpinMatrix& data, const std::filesystem::path& path);
SpinMatrix read_spin_csv(std::istream& in);
SpinMatrix read_spin_csv(const std::filesystem::path& path);

std::string rwl_fit_to_json(const RwlFit& fit);
RwlFit rwl_fit_from_json(const std::string& text);

std::string em_result_to_json(const EMResult& result);
std::string diagnostics_to_json(const DiagnosticsReport& report);

ScenarioConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& config);

std::string records_to_json(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> records_from_json(const std::string& text);
std::string curves_to_json(const std::vector<ClassCurve>& curves);
std::string node_errors_to_json(const std::vector<NodeErrorRate>& rates);
std::string edge_selection_to_json(const std::vector<EdgeSelectionFrequency>& freq);
std::string scenario_summary_to_json(const ScenarioResult& result);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace isingmis
