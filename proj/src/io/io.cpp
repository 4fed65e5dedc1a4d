#include "bnsl/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bnsl/error.hpp"

namespace bnsl {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw DataError(std::string(where) + ": missing '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string(where) + ": bad '" + key + "': " + e.what());
    }
}

}  // namespace

DiscreteBn network_from_json(const json& j) {
    const auto vars = field<json>(j, "variables", "network");
    if (!vars.is_array()) throw DataError("network: 'variables' must be a list");
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> levels;
    for (const auto& v : vars) {
        names.push_back(field<std::string>(v, "name", "network variable"));
        levels.push_back(field<std::vector<std::string>>(v, "levels", "network variable"));
    }
    Dag dag{NodeTable(names)};
    for (const auto& arc : field<std::vector<std::vector<std::string>>>(j, "arcs", "network")) {
        if (arc.size() != 2) throw DataError("network: each arc is [parent, child]");
        dag.add_arc(arc[0], arc[1]);
    }
    const auto cpts_json = field<json>(j, "cpts", "network");
    if (!cpts_json.is_object()) throw DataError("network: 'cpts' must be an object keyed by node");
    std::vector<Cpt> cpts(names.size());
    std::vector<bool> seen(names.size(), false);
    for (const auto& [name, entry] : cpts_json.items()) {
        const NodeIndex i = dag.nodes().index_of(name);
        seen[i] = true;
        cpts[i].parents = dag.nodes().indices_of(field<std::vector<std::string>>(entry, "parents", "cpt"));
        for (const auto& row : field<std::vector<std::vector<double>>>(entry, "table", "cpt")) {
            if (row.size() != levels[i].size()) {
                throw DataError("cpt of '" + name + "': row length differs from the number of levels");
            }
            cpts[i].table.insert(cpts[i].table.end(), row.begin(), row.end());
        }
    }
    for (NodeIndex i = 0; i < names.size(); ++i) {
        if (!seen[i]) throw DataError("network: no cpt for '" + names[i] + "'");
    }
    return DiscreteBn(std::move(dag), std::move(levels), std::move(cpts));
}

json network_to_json(const DiscreteBn& bn) {
    const NodeTable& nodes = bn.nodes();
    json j;
    j["variables"] = json::array();
    for (NodeIndex i = 0; i < bn.size(); ++i) {
        j["variables"].push_back({{"name", nodes.name(i)}, {"levels", bn.levels(i)}});
    }
    j["arcs"] = json::array();
    for (auto [p, c] : bn.dag().arcs()) {
        j["arcs"].push_back({nodes.name(p), nodes.name(c)});
    }
    j["cpts"] = json::object();
    for (NodeIndex i = 0; i < bn.size(); ++i) {
        json rows = json::array();
        for (std::size_t r = 0; r < bn.num_configurations(i); ++r) {
            auto row = bn.row(i, r);
            rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        j["cpts"][nodes.name(i)] = {{"parents", nodes.names_of(bn.cpt(i).parents)}, {"table", rows}};
    }
    return j;
}

DiscreteBn read_network(const std::filesystem::path& path) {
    return network_from_json(parse_json_file(path));
}

void write_network(const std::filesystem::path& path, const DiscreteBn& bn) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << network_to_json(bn).dump(2) << '\n';
}

json graph_to_json(const Pdag& g) {
    const NodeTable& nodes = g.nodes();
    json j;
    j["nodes"] = nodes.names();
    j["edges"] = json::array();
    std::vector<std::tuple<std::string, std::string, bool>> edges;
    for (auto [a, b] : g.directed_arcs()) edges.emplace_back(nodes.name(a), nodes.name(b), true);
    for (auto [a, b] : g.undirected_edges()) {
        auto x = nodes.name(a), y = nodes.name(b);
        if (y < x) std::swap(x, y);
        edges.emplace_back(x, y, false);
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& [from, to, directed] : edges) {
        j["edges"].push_back({{"from", from}, {"to", to}, {"directed", directed}});
    }
    return j;
}

json graph_to_json(const Skeleton& g) {
    return graph_to_json(Pdag::from_skeleton(g));
}

json graph_to_json(const Dag& g) {
    return graph_to_json(g.to_pdag());
}

Pdag graph_from_json(const json& j) {
    Pdag g{NodeTable(field<std::vector<std::string>>(j, "nodes", "graph"))};
    const auto edges = field<json>(j, "edges", "graph");
    if (!edges.is_array()) throw DataError("graph: 'edges' must be a list");
    for (const auto& e : edges) {
        const NodeIndex a = g.nodes().index_of(field<std::string>(e, "from", "graph edge"));
        const NodeIndex b = g.nodes().index_of(field<std::string>(e, "to", "graph edge"));
        if (a == b) throw DataError("graph: self-loop on '" + g.nodes().name(a) + "'");
        if (g.adjacent(a, b)) {
            throw DataError("graph: more than one edge between '" + g.nodes().name(a) + "' and '" +
                            g.nodes().name(b) + "'");
        }
        if (field<bool>(e, "directed", "graph edge")) {
            g.set_directed(a, b);
        } else {
            g.set_undirected(a, b);
        }
    }
    return g;
}

Pdag read_graph(const std::filesystem::path& path) {
    return graph_from_json(parse_json_file(path));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && cell.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cell));
            cell.clear();
            was_quoted = false;
        } else {
            cell += c;
        }
    }
    if (quoted) {
        throw DataError("csv line " + std::to_string(line_no) + ": unterminated quote");
    }
    out.push_back(std::move(cell));
    return out;
}

bool needs_quotes(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (line.empty()) continue;
        auto cells = split_record(line, line_no);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields, found " + std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) {
        throw DataError("csv input is empty");
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return read_csv(in);
}

void write_csv(std::ostream& out, const CsvTable& table) {
    auto put = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            if (needs_quotes(cells[i])) {
                out << '"';
                for (char c : cells[i]) {
                    if (c == '"') out << '"';
                    out << c;
                }
                out << '"';
            } else {
                out << cells[i];
            }
        }
        out << '\n';
    };
    put(table.header);
    for (const auto& row : table.rows) put(row);
}

DiscreteDataset discrete_from_csv(const CsvTable& table, const std::optional<std::vector<DiscreteVariable>>& declared) {
    const std::size_t p = table.header.size();
    std::vector<DiscreteVariable> vars(p);
    if (declared) {
        std::map<std::string, const DiscreteVariable*> by_name;
        for (const auto& v : *declared) by_name[v.name] = &v;
        for (std::size_t c = 0; c < p; ++c) {
            auto it = by_name.find(table.header[c]);
            if (it == by_name.end()) throw UnknownNode(table.header[c]);
            vars[c] = *it->second;
        }
    } else {
        for (std::size_t c = 0; c < p; ++c) {
            std::set<std::string> seen;
            for (const auto& row : table.rows) seen.insert(row[c]);
            vars[c] = DiscreteVariable{table.header[c], {seen.begin(), seen.end()}};
        }
    }
    std::vector<std::vector<Level>> columns(p);
    for (std::size_t c = 0; c < p; ++c) {
        std::map<std::string_view, Level> code;
        for (Level l = 0; l < vars[c].levels.size(); ++l) code[vars[c].levels[l]] = l;
        columns[c].reserve(table.rows.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& cell = table.rows[r][c];
            if (cell.empty() || cell == "NA") {
                throw DataError("missing value in column '" + vars[c].name + "', row " + std::to_string(r + 1));
            }
            auto it = code.find(cell);
            if (it == code.end()) {
                throw DataError("unknown level '" + cell + "' in column '" + vars[c].name + "'");
            }
            columns[c].push_back(it->second);
        }
    }
    return DiscreteDataset(std::move(vars), std::move(columns));
}

ContinuousDataset continuous_from_csv(const CsvTable& table) {
    const std::size_t p = table.header.size();
    std::vector<std::vector<double>> columns(p);
    for (std::size_t c = 0; c < p; ++c) {
        columns[c].reserve(table.rows.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const std::string& cell = table.rows[r][c];
            double v = 0.0;
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            if (begin != end && *begin == '+') ++begin;
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || ptr != end || cell.empty()) {
                throw DataError("column '" + table.header[c] + "', row " + std::to_string(r + 1) +
                                ": '" + cell + "' is not a number");
            }
            columns[c].push_back(v);
        }
    }
    return ContinuousDataset(table.header, std::move(columns));
}

CsvTable to_csv(const DiscreteDataset& data) {
    CsvTable t;
    for (const auto& v : data.variables()) t.header.push_back(v.name);
    t.rows.assign(data.num_rows(), std::vector<std::string>(data.num_variables()));
    for (NodeIndex c = 0; c < data.num_variables(); ++c) {
        auto col = data.column(c);
        const auto& levels = data.variable(c).levels;
        for (std::size_t r = 0; r < data.num_rows(); ++r) t.rows[r][c] = levels[col[r]];
    }
    return t;
}

CsvTable to_csv(const ContinuousDataset& data) {
    CsvTable t;
    t.header = data.nodes().names();
    t.rows.assign(data.num_rows(), std::vector<std::string>(data.num_variables()));
    char buf[64];
    for (NodeIndex c = 0; c < data.num_variables(); ++c) {
        auto col = data.column(c);
        for (std::size_t r = 0; r < data.num_rows(); ++r) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, col[r]);
            t.rows[r][c].assign(buf, ptr);
        }
    }
    return t;
}

void write_telemetry(std::ostream& out, const LearnResult& result, const GlobalLearnConfig& cfg) {
    for (const auto& p : result.phases) {
        out << json{{"event", "phase"},
                    {"phase", p.name},
                    {"seconds", p.seconds},
                    {"worker_tests", p.worker_tests},
                    {"total_tests", p.total_tests()}}
                   .dump()
            << '\n';
    }
    out << json{{"event", "run"},
                {"algorithm", to_string(cfg.algorithm)},
                {"backtracking", to_string(cfg.backtracking)},
                {"workers", cfg.workers},
                {"schedule", to_string(cfg.schedule)},
                {"seconds", result.seconds},
                {"total_tests", result.total_tests()},
                {"v_structures", result.v_structures.size()},
                {"conflicts", result.conflicts},
                {"meek_sweeps", result.meek.sweeps}}
               .dump()
        << '\n';
}

}  // namespace bnsl
