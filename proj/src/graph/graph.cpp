#include "bnsl/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bnsl/error.hpp"

namespace bnsl {

NodeTable::NodeTable(std::vector<std::string> names) : names_(std::move(names)) {
    lookup_.reserve(names_.size());
    for (NodeIndex i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) {
            throw DataError("node names must be non-empty");
        }
        if (!lookup_.emplace(names_[i], i).second) {
            throw DataError("duplicate node name '" + names_[i] + "'");
        }
    }
    canonical_.resize(names_.size());
    std::iota(canonical_.begin(), canonical_.end(), NodeIndex{0});
    std::sort(canonical_.begin(), canonical_.end(),
              [this](NodeIndex a, NodeIndex b) { return names_[a] < names_[b]; });
    rank_.resize(names_.size());
    for (std::size_t r = 0; r < canonical_.size(); ++r) {
        rank_[canonical_[r]] = r;
    }
}

NodeIndex NodeTable::index_of(std::string_view name) const {
    auto it = lookup_.find(std::string(name));
    if (it == lookup_.end()) {
        throw UnknownNode(std::string(name));
    }
    return it->second;
}

bool NodeTable::contains(std::string_view name) const {
    return lookup_.find(std::string(name)) != lookup_.end();
}

NodeList NodeTable::indices_of(const std::vector<std::string>& names) const {
    NodeList out;
    out.reserve(names.size());
    for (const auto& n : names) {
        out.push_back(index_of(n));
    }
    return out;
}

std::vector<std::string> NodeTable::names_of(const NodeList& nodes) const {
    std::vector<std::string> out;
    out.reserve(nodes.size());
    for (NodeIndex i : nodes) {
        out.push_back(names_.at(i));
    }
    return out;
}

void NodeTable::sort_canonical(NodeList& nodes) const {
    std::sort(nodes.begin(), nodes.end(),
              [this](NodeIndex a, NodeIndex b) { return rank_[a] < rank_[b]; });
}

bool NodeTable::same_set(const NodeTable& other) const {
    if (size() != other.size()) {
        return false;
    }
    return std::all_of(names_.begin(), names_.end(),
                       [&](const std::string& n) { return other.contains(n); });
}

// ---------------------------------------------------------------------------

Skeleton::Skeleton(NodeTable nodes)
    : nodes_(std::move(nodes)), n_(nodes_.size()), adj_(n_ * n_, 0) {}

void Skeleton::check(NodeIndex a, NodeIndex b) const {
    if (a >= n_ || b >= n_) {
        throw DataError("node index out of range");
    }
    if (a == b) {
        throw DataError("self-loop on '" + nodes_.name(a) + "'");
    }
}

void Skeleton::add_edge(NodeIndex a, NodeIndex b) {
    check(a, b);
    if (!adj_[a * n_ + b]) {
        adj_[a * n_ + b] = adj_[b * n_ + a] = 1;
        ++num_edges_;
    }
}

void Skeleton::add_edge(std::string_view a, std::string_view b) {
    add_edge(nodes_.index_of(a), nodes_.index_of(b));
}

void Skeleton::remove_edge(NodeIndex a, NodeIndex b) {
    check(a, b);
    if (adj_[a * n_ + b]) {
        adj_[a * n_ + b] = adj_[b * n_ + a] = 0;
        --num_edges_;
    }
}

NodeList Skeleton::neighbours(NodeIndex a) const {
    NodeList out;
    for (NodeIndex b = 0; b < n_; ++b) {
        if (adj_[a * n_ + b]) {
            out.push_back(b);
        }
    }
    return out;
}

std::vector<Edge> Skeleton::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (NodeIndex a = 0; a < n_; ++a) {
        for (NodeIndex b = a + 1; b < n_; ++b) {
            if (adj_[a * n_ + b]) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Pdag::Pdag(NodeTable nodes) : nodes_(std::move(nodes)), n_(nodes_.size()), arcs_(n_ * n_, 0) {}

Pdag Pdag::from_skeleton(const Skeleton& skeleton) {
    Pdag out(skeleton.nodes());
    for (auto [a, b] : skeleton.edges()) {
        out.set_undirected(a, b);
    }
    return out;
}

void Pdag::check(NodeIndex a, NodeIndex b) const {
    if (a >= n_ || b >= n_) {
        throw DataError("node index out of range");
    }
    if (a == b) {
        throw DataError("self-loop on '" + nodes_.name(a) + "'");
    }
}

void Pdag::set_undirected(NodeIndex a, NodeIndex b) {
    check(a, b);
    arcs_[a * n_ + b] = arcs_[b * n_ + a] = 1;
}

void Pdag::set_directed(NodeIndex from, NodeIndex to) {
    check(from, to);
    arcs_[from * n_ + to] = 1;
    arcs_[to * n_ + from] = 0;
}

void Pdag::remove(NodeIndex a, NodeIndex b) {
    check(a, b);
    arcs_[a * n_ + b] = arcs_[b * n_ + a] = 0;
}

NodeList Pdag::parents(NodeIndex a) const {
    NodeList out;
    for (NodeIndex b = 0; b < n_; ++b) {
        if (b != a && has_directed(b, a)) {
            out.push_back(b);
        }
    }
    return out;
}

NodeList Pdag::children(NodeIndex a) const {
    NodeList out;
    for (NodeIndex b = 0; b < n_; ++b) {
        if (b != a && has_directed(a, b)) {
            out.push_back(b);
        }
    }
    return out;
}

NodeList Pdag::undirected_neighbours(NodeIndex a) const {
    NodeList out;
    for (NodeIndex b = 0; b < n_; ++b) {
        if (b != a && has_undirected(a, b)) {
            out.push_back(b);
        }
    }
    return out;
}

NodeList Pdag::adjacents(NodeIndex a) const {
    NodeList out;
    for (NodeIndex b = 0; b < n_; ++b) {
        if (b != a && adjacent(a, b)) {
            out.push_back(b);
        }
    }
    return out;
}

std::vector<Edge> Pdag::directed_arcs() const {
    std::vector<Edge> out;
    for (NodeIndex a = 0; a < n_; ++a) {
        for (NodeIndex b = 0; b < n_; ++b) {
            if (a != b && has_directed(a, b)) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

std::vector<Edge> Pdag::undirected_edges() const {
    std::vector<Edge> out;
    for (NodeIndex a = 0; a < n_; ++a) {
        for (NodeIndex b = a + 1; b < n_; ++b) {
            if (has_undirected(a, b)) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

Skeleton Pdag::skeleton() const {
    Skeleton out(nodes_);
    for (NodeIndex a = 0; a < n_; ++a) {
        for (NodeIndex b = a + 1; b < n_; ++b) {
            if (adjacent(a, b)) {
                out.add_edge(a, b);
            }
        }
    }
    return out;
}

bool Pdag::directed_part_acyclic() const {
    std::vector<std::size_t> indegree(n_, 0);
    for (auto [a, b] : directed_arcs()) {
        ++indegree[b];
    }
    NodeList ready;
    for (NodeIndex i = 0; i < n_; ++i) {
        if (indegree[i] == 0) {
            ready.push_back(i);
        }
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        NodeIndex a = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeIndex b = 0; b < n_; ++b) {
            if (b != a && has_directed(a, b) && --indegree[b] == 0) {
                ready.push_back(b);
            }
        }
    }
    return seen == n_;
}

// ---------------------------------------------------------------------------

Dag::Dag(NodeTable nodes)
    : nodes_(std::move(nodes)),
      n_(nodes_.size()),
      arcs_(n_ * n_, 0),
      parents_(n_),
      children_(n_) {}

bool Dag::reachable(NodeIndex from, NodeIndex to) const {
    std::vector<std::uint8_t> seen(n_, 0);
    NodeList stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        NodeIndex a = stack.back();
        stack.pop_back();
        if (a == to) {
            return true;
        }
        for (NodeIndex c : children_[a]) {
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
        }
    }
    return false;
}

bool Dag::can_add_arc(NodeIndex parent, NodeIndex child) const {
    return parent != child && !reachable(child, parent);
}

void Dag::add_arc(NodeIndex parent, NodeIndex child) {
    if (parent >= n_ || child >= n_) {
        throw DataError("node index out of range");
    }
    if (has_arc(parent, child)) {
        return;
    }
    if (!can_add_arc(parent, child)) {
        throw DataError("arc " + nodes_.name(parent) + " -> " + nodes_.name(child) +
                        " would create a cycle");
    }
    arcs_[parent * n_ + child] = 1;
    auto insert_sorted = [](NodeList& v, NodeIndex x) {
        v.insert(std::upper_bound(v.begin(), v.end(), x), x);
    };
    insert_sorted(parents_[child], parent);
    insert_sorted(children_[parent], child);
    ++num_arcs_;
}

void Dag::add_arc(std::string_view parent, std::string_view child) {
    add_arc(nodes_.index_of(parent), nodes_.index_of(child));
}

std::vector<Edge> Dag::arcs() const {
    std::vector<Edge> out;
    out.reserve(num_arcs_);
    for (NodeIndex a = 0; a < n_; ++a) {
        for (NodeIndex c : children_[a]) {
            out.emplace_back(a, c);
        }
    }
    return out;
}

NodeList Dag::topological_order() const {
    std::vector<std::size_t> indegree(n_);
    for (NodeIndex i = 0; i < n_; ++i) {
        indegree[i] = parents_[i].size();
    }
    // ready set kept sorted descending so back() is the smallest index
    NodeList ready;
    for (NodeIndex i = n_; i-- > 0;) {
        if (indegree[i] == 0) {
            ready.push_back(i);
        }
    }
    NodeList order;
    order.reserve(n_);
    while (!ready.empty()) {
        NodeIndex a = ready.back();
        ready.pop_back();
        order.push_back(a);
        for (NodeIndex c : children_[a]) {
            if (--indegree[c] == 0) {
                ready.insert(std::upper_bound(ready.begin(), ready.end(), c, std::greater<>{}), c);
            }
        }
    }
    return order;
}

Skeleton Dag::skeleton() const {
    Skeleton out(nodes_);
    for (auto [a, b] : arcs()) {
        out.add_edge(a, b);
    }
    return out;
}

Pdag Dag::to_pdag() const {
    Pdag out(nodes_);
    for (auto [a, b] : arcs()) {
        out.set_directed(a, b);
    }
    return out;
}

}  // namespace bnsl
