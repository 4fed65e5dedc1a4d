#include "bnsl/graph_algorithms.hpp"

#include <algorithm>

#include "bnsl/error.hpp"
#include "bnsl/orientation.hpp"

namespace bnsl {

bool d_separated(const Dag& dag, NodeIndex x, NodeIndex y, std::span<const NodeIndex> z) {
    const std::size_t n = dag.size();
    if (x >= n || y >= n) {
        throw DataError("node index out of range");
    }
    if (x == y) {
        throw DataError("d_separated requires two distinct nodes");
    }
    std::vector<std::uint8_t> in_z(n, 0);
    for (NodeIndex v : z) {
        if (v >= n) {
            throw DataError("node index out of range");
        }
        in_z[v] = 1;
    }
    if (in_z[x] || in_z[y]) {
        throw DataError("endpoints must not be in the conditioning set");
    }

    // ancestors of z, including z itself
    std::vector<std::uint8_t> anc(n, 0);
    NodeList stack(z.begin(), z.end());
    for (NodeIndex v : z) {
        anc[v] = 1;
    }
    while (!stack.empty()) {
        NodeIndex v = stack.back();
        stack.pop_back();
        for (NodeIndex p : dag.parents(v)) {
            if (!anc[p]) {
                anc[p] = 1;
                stack.push_back(p);
            }
        }
    }

    // state = 2 * node + dir; dir 0 = arrived from a child (moving up),
    // dir 1 = arrived from a parent (moving down)
    std::vector<std::uint8_t> visited(2 * n, 0);
    std::vector<std::size_t> queue{2 * x};
    visited[2 * x] = 1;
    auto push = [&](NodeIndex v, int dir) {
        std::size_t s = 2 * v + static_cast<std::size_t>(dir);
        if (!visited[s]) {
            visited[s] = 1;
            queue.push_back(s);
        }
    };
    while (!queue.empty()) {
        std::size_t s = queue.back();
        queue.pop_back();
        NodeIndex v = s / 2;
        bool from_child = (s % 2) == 0;
        if (v == y) {
            return false;
        }
        if (from_child) {
            if (!in_z[v]) {
                for (NodeIndex p : dag.parents(v)) push(p, 0);
                for (NodeIndex c : dag.children(v)) push(c, 1);
            }
        } else {
            if (!in_z[v]) {
                for (NodeIndex c : dag.children(v)) push(c, 1);
            }
            if (anc[v]) {
                for (NodeIndex p : dag.parents(v)) push(p, 0);
            }
        }
    }
    return true;
}

bool d_separated(const Dag& dag, const std::string& x, const std::string& y,
                 const std::vector<std::string>& z) {
    NodeList zi = dag.nodes().indices_of(z);
    return d_separated(dag, dag.nodes().index_of(x), dag.nodes().index_of(y), zi);
}

NodeList markov_blanket_of(const Dag& dag, NodeIndex x) {
    if (x >= dag.size()) {
        throw DataError("node index out of range");
    }
    std::vector<std::uint8_t> member(dag.size(), 0);
    for (NodeIndex p : dag.parents(x)) member[p] = 1;
    for (NodeIndex c : dag.children(x)) {
        member[c] = 1;
        for (NodeIndex s : dag.parents(c)) member[s] = 1;
    }
    member[x] = 0;
    NodeList out;
    for (NodeIndex i = 0; i < dag.size(); ++i) {
        if (member[i]) out.push_back(i);
    }
    return out;
}

NodeList markov_blanket_of(const Dag& dag, const std::string& x) {
    return markov_blanket_of(dag, dag.nodes().index_of(x));
}

bool has_strictly_directed_path(const Pdag& pdag, NodeIndex from, NodeIndex to) {
    const std::size_t n = pdag.size();
    if (from >= n || to >= n) {
        throw DataError("node index out of range");
    }
    std::vector<std::uint8_t> seen(n, 0);
    NodeList stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        NodeIndex a = stack.back();
        stack.pop_back();
        for (NodeIndex b = 0; b < n; ++b) {
            if (b == a || !pdag.has_directed(a, b)) {
                continue;
            }
            if (b == to) {
                return true;
            }
            if (!seen[b]) {
                seen[b] = 1;
                stack.push_back(b);
            }
        }
    }
    return false;
}

bool has_strictly_directed_path(const Pdag& pdag, const std::string& from, const std::string& to) {
    return has_strictly_directed_path(pdag, pdag.nodes().index_of(from), pdag.nodes().index_of(to));
}

std::size_t hamming_skeleton(const Skeleton& a, const Skeleton& b) {
    if (!a.nodes().same_set(b.nodes())) {
        throw DataError("hamming distance requires skeletons over the same node set");
    }
    std::vector<NodeIndex> to_b(a.size());
    for (NodeIndex i = 0; i < a.size(); ++i) {
        to_b[i] = b.nodes().index_of(a.nodes().name(i));
    }
    std::size_t common = 0;
    for (auto [u, v] : a.edges()) {
        if (b.adjacent(to_b[u], to_b[v])) {
            ++common;
        }
    }
    return (a.num_edges() - common) + (b.num_edges() - common);
}

std::vector<VStructure> unshielded_colliders(const Dag& dag) {
    std::vector<VStructure> out;
    for (NodeIndex k = 0; k < dag.size(); ++k) {
        const NodeList& pa = dag.parents(k);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                NodeIndex a = pa[i], b = pa[j];
                if (!dag.has_arc(a, b) && !dag.has_arc(b, a)) {
                    out.push_back(make_v_structure(dag.nodes(), a, k, b));
                }
            }
        }
    }
    sort_v_structures(dag.nodes(), out);
    return out;
}

Pdag dag_to_cpdag(const Dag& dag) {
    Pdag pattern = Pdag::from_skeleton(dag.skeleton());
    auto vs = unshielded_colliders(dag);
    apply_v_structures(pattern, vs);
    return apply_meek_rules(std::move(pattern));
}

}  // namespace bnsl
