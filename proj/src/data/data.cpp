#include "bnsl/data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

std::vector<std::string> names_of(const std::vector<DiscreteVariable>& vars) {
    std::vector<std::string> out;
    out.reserve(vars.size());
    for (const auto& v : vars) out.push_back(v.name);
    return out;
}

}  // namespace

DiscreteDataset::DiscreteDataset(std::vector<DiscreteVariable> variables,
                                 std::vector<std::vector<Level>> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)), nodes_(names_of(variables_)) {
    if (variables_.empty()) {
        throw DataError("dataset has no variables");
    }
    if (columns_.size() != variables_.size()) {
        throw DataError("dataset has " + std::to_string(columns_.size()) + " columns for " +
                        std::to_string(variables_.size()) + " variables");
    }
    rows_ = columns_.front().size();
    if (rows_ == 0) {
        throw DataError("dataset has no observations");
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& var = variables_[i];
        if (var.levels.empty()) {
            throw DataError("variable '" + var.name + "' has no levels");
        }
        if (columns_[i].size() != rows_) {
            throw DataError("column '" + var.name + "' has a different number of rows");
        }
        auto card = static_cast<Level>(var.cardinality());
        if (std::any_of(columns_[i].begin(), columns_[i].end(), [card](Level l) { return l >= card; })) {
            throw DataError("column '" + var.name + "' has a level index out of range");
        }
    }
}

ContinuousDataset::ContinuousDataset(std::vector<std::string> names,
                                     std::vector<std::vector<double>> columns)
    : nodes_(std::move(names)), columns_(std::move(columns)) {
    if (nodes_.size() == 0) {
        throw DataError("dataset has no variables");
    }
    if (columns_.size() != nodes_.size()) {
        throw DataError("dataset column count does not match variable count");
    }
    rows_ = columns_.front().size();
    if (rows_ == 0) {
        throw DataError("dataset has no observations");
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].size() != rows_) {
            throw DataError("column '" + nodes_.name(i) + "' has a different number of rows");
        }
        if (!std::all_of(columns_[i].begin(), columns_[i].end(), [](double v) { return std::isfinite(v); })) {
            throw DataError("column '" + nodes_.name(i) + "' has a missing or non-finite value");
        }
    }
}

const NodeTable& nodes_of(const Dataset& data) {
    return std::visit([](const auto& d) -> const NodeTable& { return d.nodes(); }, data);
}

std::size_t num_rows(const Dataset& data) {
    return std::visit([](const auto& d) { return d.num_rows(); }, data);
}

DiscreteDataset reverse_columns(const DiscreteDataset& data) {
    std::vector<DiscreteVariable> vars(data.variables().rbegin(), data.variables().rend());
    std::vector<std::vector<Level>> cols;
    cols.reserve(data.num_variables());
    for (std::size_t i = data.num_variables(); i-- > 0;) {
        auto c = data.column(i);
        cols.emplace_back(c.begin(), c.end());
    }
    return DiscreteDataset(std::move(vars), std::move(cols));
}

ContinuousDataset reverse_columns(const ContinuousDataset& data) {
    std::vector<std::string> names(data.nodes().names().rbegin(), data.nodes().names().rend());
    std::vector<std::vector<double>> cols;
    cols.reserve(data.num_variables());
    for (std::size_t i = data.num_variables(); i-- > 0;) {
        auto c = data.column(i);
        cols.emplace_back(c.begin(), c.end());
    }
    return ContinuousDataset(std::move(names), std::move(cols));
}

Dataset reverse_columns(const Dataset& data) {
    return std::visit([](const auto& d) -> Dataset { return reverse_columns(d); }, data);
}

}  // namespace bnsl
