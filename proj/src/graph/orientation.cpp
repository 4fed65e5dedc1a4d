#include "bnsl/orientation.hpp"

#include <algorithm>
#include <tuple>

#include "bnsl/graph_algorithms.hpp"

namespace bnsl {

VStructure make_v_structure(const NodeTable& nodes, NodeIndex a, NodeIndex collider, NodeIndex b) {
    if (nodes.canonical_less(b, a)) {
        std::swap(a, b);
    }
    return {a, collider, b};
}

void sort_v_structures(const NodeTable& nodes, std::vector<VStructure>& vs) {
    std::sort(vs.begin(), vs.end(), [&](const VStructure& p, const VStructure& q) {
        return std::tuple(nodes.rank(p.left), nodes.rank(p.right), nodes.rank(p.collider)) <
               std::tuple(nodes.rank(q.left), nodes.rank(q.right), nodes.rank(q.collider));
    });
}

namespace {

// true when from -> to could be set without a conflict
bool orientable(const Pdag& g, NodeIndex from, NodeIndex to) {
    if (g.has_directed(from, to)) {
        return true;
    }
    if (!g.has_undirected(from, to)) {
        return false;
    }
    return !has_strictly_directed_path(g, to, from);
}

std::vector<Edge> canonical_undirected(const Pdag& g) {
    const NodeTable& nodes = g.nodes();
    std::vector<Edge> out;
    for (auto [a, b] : g.undirected_edges()) {
        if (nodes.canonical_less(b, a)) std::swap(a, b);
        out.emplace_back(a, b);
    }
    std::sort(out.begin(), out.end(), [&](const Edge& p, const Edge& q) {
        return std::pair(nodes.rank(p.first), nodes.rank(p.second)) <
               std::pair(nodes.rank(q.first), nodes.rank(q.second));
    });
    return out;
}

bool rule_a(const Pdag& g, NodeIndex from, NodeIndex to) {
    return has_strictly_directed_path(g, from, to);
}

bool rule_b(const Pdag& g, NodeIndex k, NodeIndex b) {
    for (NodeIndex a : g.parents(k)) {
        if (a != b && !g.adjacent(a, b)) {
            return true;
        }
    }
    return false;
}

bool rule_c(const Pdag& g, NodeIndex a, NodeIndex b) {
    NodeList ks;
    for (NodeIndex k : g.undirected_neighbours(a)) {
        if (k != b && g.has_directed(k, b)) {
            ks.push_back(k);
        }
    }
    for (std::size_t i = 0; i < ks.size(); ++i) {
        for (std::size_t j = i + 1; j < ks.size(); ++j) {
            if (!g.adjacent(ks[i], ks[j])) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

std::size_t apply_v_structures(Pdag& pdag, std::span<const VStructure> vs) {
    std::size_t conflicts = 0;
    for (const VStructure& v : vs) {
        for (NodeIndex tail : {v.left, v.right}) {
            if (!pdag.adjacent(tail, v.collider)) {
                ++conflicts;
                continue;
            }
            if (orientable(pdag, tail, v.collider)) {
                pdag.set_directed(tail, v.collider);
            } else {
                ++conflicts;
            }
        }
    }
    return conflicts;
}

Pdag apply_meek_rules(Pdag pdag, MeekTrace* trace) {
    MeekTrace local;
    using Rule = bool (*)(const Pdag&, NodeIndex, NodeIndex);
    const Rule rules[] = {rule_a, rule_b, rule_c};
    bool changed = true;
    while (changed) {
        changed = false;
        ++local.sweeps;
        for (Rule rule : rules) {
            for (auto [u, v] : canonical_undirected(pdag)) {
                if (!pdag.has_undirected(u, v)) {
                    continue;
                }
                for (auto [from, to] : {Edge{u, v}, Edge{v, u}}) {
                    if (!rule(pdag, from, to)) {
                        continue;
                    }
                    if (orientable(pdag, from, to)) {
                        pdag.set_directed(from, to);
                        ++local.oriented;
                        changed = true;
                    } else {
                        ++local.skipped_cycles;
                    }
                    break;
                }
            }
        }
    }
    if (trace) {
        *trace = local;
    }
    return pdag;
}

}  // namespace bnsl
