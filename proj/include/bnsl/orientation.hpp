#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bnsl/graph.hpp"

namespace bnsl {

/// Sort v-structures by (left, right, collider) in canonical name order.
void sort_v_structures(const NodeTable& nodes, std::vector<VStructure>& vs);

/// Build a canonically stored v-structure (left before right by name).
VStructure make_v_structure(const NodeTable& nodes, NodeIndex a, NodeIndex collider, NodeIndex b);

/**
 * Orient each v-structure into `pdag` in the given order, first wins.
 *
 * An arc is skipped, and counted as a conflict, when the edge is already
 * directed the other way or when orienting it would close a directed cycle.
 * Returns the number of conflicts.
 */
std::size_t apply_v_structures(Pdag& pdag, std::span<const VStructure> vs);

struct MeekTrace {
    std::size_t sweeps = 0;
    std::size_t oriented = 0;
    std::size_t skipped_cycles = 0;
};

/**
 * Propagate orientations to a fixpoint.
 *
 *  (a) a - b with a strictly directed path a ~> b   =>  a -> b
 *  (b) a -> k, k - b, a and b non-adjacent            =>  k -> b
 *  (c) a - b, a - k1 -> b, a - k2 -> b, k1 and k2
 *      non-adjacent                                   =>  a -> b
 *
 * Each sweep visits undirected edges in canonical order and tries (a), then
 * (b), then (c); sweeps repeat until nothing changes. An orientation that
 * would close a directed cycle is never applied.
 */
Pdag apply_meek_rules(Pdag pdag, MeekTrace* trace = nullptr);

}  // namespace bnsl
