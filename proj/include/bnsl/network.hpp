#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bnsl/data.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

/**
 * Conditional probability table of one node.
 *
 * Rows are parent configurations in lexicographic order with the last
 * listed parent varying fastest; each row holds one probability per level.
 */
struct Cpt {
    NodeList parents;
    std::vector<double> table;
};

/// Discrete Bayesian network: DAG plus one CPT per node.
class DiscreteBn {
public:
    static constexpr double row_tolerance = 1e-9;

    DiscreteBn(Dag dag, std::vector<std::vector<std::string>> levels, std::vector<Cpt> cpts);

    const Dag& dag() const noexcept { return dag_; }
    const NodeTable& nodes() const noexcept { return dag_.nodes(); }
    std::size_t size() const noexcept { return dag_.size(); }
    std::size_t cardinality(NodeIndex i) const { return levels_.at(i).size(); }
    const std::vector<std::string>& levels(NodeIndex i) const { return levels_.at(i); }
    const Cpt& cpt(NodeIndex i) const { return cpts_.at(i); }

    /// Number of parent configurations of node i.
    std::size_t num_configurations(NodeIndex i) const;
    std::span<const double> row(NodeIndex i, std::size_t configuration) const;

    std::vector<DiscreteVariable> variables() const;

private:
    Dag dag_;
    std::vector<std::vector<std::string>> levels_;
    std::vector<Cpt> cpts_;
};

/// Free parameters: sum over nodes of (levels - 1) * parent configurations.
std::uint64_t nparams(const DiscreteBn& bn);

/// n independent forward (ancestral) draws; deterministic given the seed.
DiscreteDataset sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed);

}  // namespace bnsl
