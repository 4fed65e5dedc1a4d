#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "bnsl/data.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/network.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

struct RandomDagSpec {
    std::size_t nodes = 10;
    std::size_t max_in_degree = 3;
    /// Expected number of arcs; capped by the in-degree limit.
    double expected_arcs = 12.0;
    std::string prefix = "X";
};

/**
 * Random DAG over nodes named prefix + zero-padded number. The topological
 * order is a random permutation, so it is unrelated to names and columns.
 */
Dag random_dag(const RandomDagSpec& spec, Rng& rng);

struct RandomCptSpec {
    std::size_t min_levels = 2;
    std::size_t max_levels = 3;
    /// Every probability is at least floor / levels.
    double floor = 0.1;
};

/// CPT rows are flat Dirichlet draws mixed with the uniform row by `floor`.
DiscreteBn random_discrete_bn(const Dag& dag, const RandomCptSpec& spec, Rng& rng);

/// X_i = sum of w * parent + N(0, 1), weights uniform on +-[0.5, 1.5].
ContinuousDataset sample_linear_gaussian(const Dag& dag, std::size_t n, std::uint64_t seed);

}  // namespace bnsl
