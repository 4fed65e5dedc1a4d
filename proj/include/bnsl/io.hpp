#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnsl/data.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/network.hpp"
#include "bnsl/structure.hpp"

namespace bnsl {

using json = nlohmann::json;

// Network JSON:
//   {"variables": [{"name": "A", "levels": ["a1", "a2"]}, ...],
//    "arcs": [["A", "B"], ...],
//    "cpts": {"B": {"parents": ["A"], "table": [[0.9, 0.1], [0.2, 0.8]]}, ...}}
// Table rows are parent configurations, last parent varying fastest.
DiscreteBn network_from_json(const json& j);
json network_to_json(const DiscreteBn& bn);
DiscreteBn read_network(const std::filesystem::path& path);
void write_network(const std::filesystem::path& path, const DiscreteBn& bn);

// Graph JSON: {"nodes": [...], "edges": [{"from": "A", "to": "B", "directed": true}, ...]}
json graph_to_json(const Pdag& g);
json graph_to_json(const Skeleton& g);
json graph_to_json(const Dag& g);
Pdag graph_from_json(const json& j);
Pdag read_graph(const std::filesystem::path& path);

/// Header row plus string cells. Fields may be double-quoted; "" escapes a quote.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);
/// Quotes only the fields that need it.
void write_csv(std::ostream& out, const CsvTable& table);

/// Cells are level labels. Without `declared` levels, each variable gets its
/// observed labels in lexicographic order; with them, columns are matched by
/// name and unknown labels are errors.
DiscreteDataset discrete_from_csv(const CsvTable& table,
                                  const std::optional<std::vector<DiscreteVariable>>& declared = std::nullopt);
ContinuousDataset continuous_from_csv(const CsvTable& table);
CsvTable to_csv(const DiscreteDataset& data);
/// Values printed with round-trip precision.
CsvTable to_csv(const ContinuousDataset& data);

/// One JSON object per phase plus a closing "run" record, one per line.
void write_telemetry(std::ostream& out, const LearnResult& result, const GlobalLearnConfig& cfg);

std::string read_text(const std::filesystem::path& path);

}  // namespace bnsl
