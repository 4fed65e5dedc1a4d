#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bnsl {

using NodeIndex = std::size_t;
using NodeList = std::vector<NodeIndex>;
using Edge = std::pair<NodeIndex, NodeIndex>;

/**
 * Ordered set of unique, non-empty node names.
 *
 * The storage order is the dataset column order. Every heuristic choice in
 * the learners is made in *canonical* order instead, i.e. sorted by name, so
 * that permuting the columns of a dataset cannot change a result.
 */
class NodeTable {
public:
    NodeTable() = default;
    explicit NodeTable(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(NodeIndex i) const { return names_.at(i); }

    /// Throws UnknownNode.
    NodeIndex index_of(std::string_view name) const;
    bool contains(std::string_view name) const;
    NodeList indices_of(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(const NodeList& nodes) const;

    /// Position of node `i` in name-sorted order.
    std::size_t rank(NodeIndex i) const { return rank_[i]; }
    bool canonical_less(NodeIndex a, NodeIndex b) const { return rank_[a] < rank_[b]; }
    /// Node indices sorted by name.
    const NodeList& canonical_order() const noexcept { return canonical_; }
    void sort_canonical(NodeList& nodes) const;

    bool same_set(const NodeTable& other) const;

    friend bool operator==(const NodeTable& a, const NodeTable& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeIndex> lookup_;
    std::vector<std::size_t> rank_;
    NodeList canonical_;
};

/// Undirected graph without self-loops or parallel edges.
class Skeleton {
public:
    Skeleton() = default;
    explicit Skeleton(NodeTable nodes);

    const NodeTable& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    void add_edge(NodeIndex a, NodeIndex b);
    void add_edge(std::string_view a, std::string_view b);
    void remove_edge(NodeIndex a, NodeIndex b);
    bool adjacent(NodeIndex a, NodeIndex b) const { return adj_[a * n_ + b] != 0; }

    NodeList neighbours(NodeIndex a) const;
    /// Edges as (a, b) with a < b by index.
    std::vector<Edge> edges() const;
    std::size_t num_edges() const noexcept { return num_edges_; }

    friend bool operator==(const Skeleton& a, const Skeleton& b) {
        return a.nodes_ == b.nodes_ && a.adj_ == b.adj_;
    }

private:
    void check(NodeIndex a, NodeIndex b) const;

    NodeTable nodes_;
    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
    std::size_t num_edges_ = 0;
};

/**
 * Partially directed graph. An edge between a and b is either directed
 * (a -> b), or undirected (a - b); never both.
 */
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(NodeTable nodes);
    static Pdag from_skeleton(const Skeleton& skeleton);

    const NodeTable& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Replace whatever connects a and b with a - b.
    void set_undirected(NodeIndex a, NodeIndex b);
    /// Replace whatever connects a and b with a -> b.
    void set_directed(NodeIndex from, NodeIndex to);
    void remove(NodeIndex a, NodeIndex b);

    bool adjacent(NodeIndex a, NodeIndex b) const { return arc(a, b) || arc(b, a); }
    bool has_directed(NodeIndex from, NodeIndex to) const { return arc(from, to) && !arc(to, from); }
    bool has_undirected(NodeIndex a, NodeIndex b) const { return arc(a, b) && arc(b, a); }

    NodeList parents(NodeIndex a) const;
    NodeList children(NodeIndex a) const;
    NodeList undirected_neighbours(NodeIndex a) const;
    NodeList adjacents(NodeIndex a) const;

    std::vector<Edge> directed_arcs() const;
    /// Undirected edges as (a, b) with a < b by index.
    std::vector<Edge> undirected_edges() const;

    Skeleton skeleton() const;
    bool directed_part_acyclic() const;

    friend bool operator==(const Pdag& a, const Pdag& b) {
        return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_;
    }

private:
    bool arc(NodeIndex a, NodeIndex b) const { return arcs_[a * n_ + b] != 0; }
    void check(NodeIndex a, NodeIndex b) const;

    NodeTable nodes_;
    std::size_t n_ = 0;
    std::vector<std::uint8_t> arcs_;
};

/// Directed acyclic graph. add_arc refuses arcs that would close a cycle.
class Dag {
public:
    Dag() = default;
    explicit Dag(NodeTable nodes);

    const NodeTable& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    void add_arc(NodeIndex parent, NodeIndex child);
    void add_arc(std::string_view parent, std::string_view child);
    bool has_arc(NodeIndex parent, NodeIndex child) const { return arcs_[parent * n_ + child] != 0; }
    /// True when adding parent -> child keeps the graph acyclic.
    bool can_add_arc(NodeIndex parent, NodeIndex child) const;

    const NodeList& parents(NodeIndex i) const { return parents_.at(i); }
    const NodeList& children(NodeIndex i) const { return children_.at(i); }
    std::vector<Edge> arcs() const;
    std::size_t num_arcs() const noexcept { return num_arcs_; }

    /// Kahn's algorithm, smallest index first among ready nodes.
    NodeList topological_order() const;
    Skeleton skeleton() const;
    Pdag to_pdag() const;

    friend bool operator==(const Dag& a, const Dag& b) {
        return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_;
    }

private:
    bool reachable(NodeIndex from, NodeIndex to) const;

    NodeTable nodes_;
    std::size_t n_ = 0;
    std::vector<std::uint8_t> arcs_;
    std::vector<NodeList> parents_;
    std::vector<NodeList> children_;
    std::size_t num_arcs_ = 0;
};

/// Unshielded collider left -> collider <- right, with left before right by name.
struct VStructure {
    NodeIndex left;
    NodeIndex collider;
    NodeIndex right;

    friend bool operator==(const VStructure&, const VStructure&) = default;
};

}  // namespace bnsl
