#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bnsl/graph.hpp"

namespace bnsl {

/**
 * d-separation of x and y given z, by reachability over (node, direction)
 * states ("Bayes ball"). Linear in the size of the graph.
 *
 * Requires x != y and x, y not in z.
 */
bool d_separated(const Dag& dag, NodeIndex x, NodeIndex y, std::span<const NodeIndex> z);
bool d_separated(const Dag& dag, const std::string& x, const std::string& y,
                 const std::vector<std::string>& z);

/// Parents, children and co-parents of children; sorted by index.
NodeList markov_blanket_of(const Dag& dag, NodeIndex x);
NodeList markov_blanket_of(const Dag& dag, const std::string& x);

/// Path from `from` to `to` that follows directed arcs only.
bool has_strictly_directed_path(const Pdag& pdag, NodeIndex from, NodeIndex to);
bool has_strictly_directed_path(const Pdag& pdag, const std::string& from, const std::string& to);

/// Size of the symmetric difference of the two edge sets, matched by node name.
std::size_t hamming_skeleton(const Skeleton& a, const Skeleton& b);

/// All v-structures of the DAG, sorted by (left, right, collider) names.
std::vector<VStructure> unshielded_colliders(const Dag& dag);

/// Completed PDAG of the DAG's Markov equivalence class.
Pdag dag_to_cpdag(const Dag& dag);

}  // namespace bnsl
