#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/ci_test.hpp"
#include "bnsl/executor.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/local_learn.hpp"
#include "bnsl/orientation.hpp"

namespace bnsl {

enum class Algorithm { gs, inter_iamb, mmpc, si_hiton_pc };
enum class Backtracking { none, start_set, legacy };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);
std::string_view to_string(Backtracking b);
Backtracking parse_backtracking(std::string_view s);

/// True for the algorithms that learn Markov blankets before neighbours.
bool uses_blankets(Algorithm a);

struct GlobalLearnConfig {
    Algorithm algorithm = Algorithm::si_hiton_pc;
    Backtracking backtracking = Backtracking::none;
    std::size_t workers = 1;
    Schedule schedule = Schedule::static_blocks;
    std::optional<std::size_t> max_condition_size;
    /// Run every phase with run_phase_serial instead of the OpenMP executor.
    bool serial_reference = false;

    /// Throws ConfigError; backtracking needs a single worker.
    void validate() const;
};

struct PhaseTelemetry {
    std::string name;
    double seconds = 0.0;
    std::vector<std::uint64_t> worker_tests;

    std::uint64_t total_tests() const;
};

struct SkeletonResult {
    Skeleton skeleton;
    SepsetTable sepsets;
    /// Symmetric Markov blankets, empty unless the algorithm learns them.
    std::vector<NodeList> blankets;
    /// Per-node neighbour candidates before symmetry correction.
    std::vector<NodeList> candidates;
    std::vector<PhaseTelemetry> phases;
};

struct OrientationResult {
    Pdag pdag;
    /// Accepted candidates in canonical order, including conflicting ones.
    std::vector<VStructure> v_structures;
    std::size_t conflicts = 0;
    /// Sepsets completed by the on-demand search.
    SepsetTable sepsets;
    PhaseTelemetry phase;
};

struct LearnResult {
    Pdag cpdag;
    Skeleton skeleton;
    SepsetTable sepsets;
    std::vector<VStructure> v_structures;
    std::size_t conflicts = 0;
    MeekTrace meek;
    std::vector<PhaseTelemetry> phases;
    double seconds = 0.0;

    std::uint64_t total_tests() const;
};

/// Keep a - b only when each lists the other (AND rule).
Skeleton symmetrize(const NodeTable& nodes, std::span<const NodeList> candidates);

/**
 * Markov blankets (gs, inter-iamb only), symmetry correction, neighbours,
 * symmetry correction. Variables and data come from `test`.
 *
 * With backtracking, nodes are processed one at a time in column order and
 * each earlier result constrains the later ones: a node that excluded X is
 * excluded by X, a node that included X is seeded into X's set (start-set)
 * or forced into it (legacy).
 */
SkeletonResult learn_skeleton(const CiTest& test, const GlobalLearnConfig& cfg);

/**
 * Orient X - K - Y as X -> K <- Y for every non-adjacent X, Y whose
 * separating set lacks K. Pairs without a recorded set are searched over
 * subsets of N(X) \ {Y}, then N(Y) \ {X}, with X before Y by name; when
 * nothing separates them, nothing is oriented for that pair.
 */
OrientationResult orient_v_structures(const Skeleton& skeleton, const SepsetTable& sepsets, const CiTest& test,
                                      const GlobalLearnConfig& cfg);

/// learn_skeleton, orient_v_structures and apply_meek_rules.
LearnResult learn_cpdag(const CiTest& test, const GlobalLearnConfig& cfg);

}  // namespace bnsl
