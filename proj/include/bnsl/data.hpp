#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bnsl/graph.hpp"

namespace bnsl {

using Level = std::uint32_t;

struct DiscreteVariable {
    std::string name;
    std::vector<std::string> levels;

    std::size_t cardinality() const noexcept { return levels.size(); }
    friend bool operator==(const DiscreteVariable&, const DiscreteVariable&) = default;
};

/// Column-oriented categorical sample; each cell is an index into the variable's levels.
class DiscreteDataset {
public:
    DiscreteDataset(std::vector<DiscreteVariable> variables, std::vector<std::vector<Level>> columns);

    std::size_t num_rows() const noexcept { return rows_; }
    std::size_t num_variables() const noexcept { return variables_.size(); }
    const NodeTable& nodes() const noexcept { return nodes_; }
    const DiscreteVariable& variable(NodeIndex i) const { return variables_.at(i); }
    const std::vector<DiscreteVariable>& variables() const noexcept { return variables_; }
    std::size_t cardinality(NodeIndex i) const { return variables_.at(i).cardinality(); }
    std::span<const Level> column(NodeIndex i) const { return columns_.at(i); }

    friend bool operator==(const DiscreteDataset& a, const DiscreteDataset& b) {
        return a.variables_ == b.variables_ && a.columns_ == b.columns_;
    }

private:
    std::vector<DiscreteVariable> variables_;
    std::vector<std::vector<Level>> columns_;
    NodeTable nodes_;
    std::size_t rows_ = 0;
};

/// Column-oriented real-valued sample. All values must be finite.
class ContinuousDataset {
public:
    ContinuousDataset(std::vector<std::string> names, std::vector<std::vector<double>> columns);

    std::size_t num_rows() const noexcept { return rows_; }
    std::size_t num_variables() const noexcept { return nodes_.size(); }
    const NodeTable& nodes() const noexcept { return nodes_; }
    std::span<const double> column(NodeIndex i) const { return columns_.at(i); }

    friend bool operator==(const ContinuousDataset& a, const ContinuousDataset& b) {
        return a.nodes_ == b.nodes_ && a.columns_ == b.columns_;
    }

private:
    NodeTable nodes_;
    std::vector<std::vector<double>> columns_;
    std::size_t rows_ = 0;
};

using Dataset = std::variant<DiscreteDataset, ContinuousDataset>;

const NodeTable& nodes_of(const Dataset& data);
std::size_t num_rows(const Dataset& data);

/// Same rows, variable order reversed.
DiscreteDataset reverse_columns(const DiscreteDataset& data);
ContinuousDataset reverse_columns(const ContinuousDataset& data);
Dataset reverse_columns(const Dataset& data);

}  // namespace bnsl
