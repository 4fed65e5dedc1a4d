#include "bnsl/network.hpp"

#include <algorithm>
#include <cmath>

#include "bnsl/error.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

DiscreteBn::DiscreteBn(Dag dag, std::vector<std::vector<std::string>> levels, std::vector<Cpt> cpts)
    : dag_(std::move(dag)), levels_(std::move(levels)), cpts_(std::move(cpts)) {
    const std::size_t n = dag_.size();
    if (levels_.size() != n || cpts_.size() != n) {
        throw DataError("network needs levels and a CPT for every node");
    }
    for (NodeIndex i = 0; i < n; ++i) {
        const std::string& name = dag_.nodes().name(i);
        if (levels_[i].empty()) {
            throw DataError("node '" + name + "' has no levels");
        }
        NodeList got = cpts_[i].parents;
        std::sort(got.begin(), got.end());
        if (std::adjacent_find(got.begin(), got.end()) != got.end() || got != dag_.parents(i)) {
            throw DataError("CPT parents of '" + name + "' do not match the arcs");
        }
        const std::size_t card = levels_[i].size();
        const std::size_t rows = num_configurations(i);
        if (cpts_[i].table.size() != rows * card) {
            throw DataError("CPT of '" + name + "' should have " + std::to_string(rows) + " rows of " +
                            std::to_string(card) + " probabilities");
        }
        for (std::size_t r = 0; r < rows; ++r) {
            auto p = row(i, r);
            double total = 0.0;
            for (double v : p) {
                if (!(v >= 0.0) || !std::isfinite(v)) {
                    throw DataError("CPT of '" + name + "' has an invalid probability");
                }
                total += v;
            }
            if (std::abs(total - 1.0) > row_tolerance) {
                throw DataError("CPT row " + std::to_string(r) + " of '" + name + "' sums to " +
                                std::to_string(total));
            }
        }
    }
}

std::size_t DiscreteBn::num_configurations(NodeIndex i) const {
    std::size_t rows = 1;
    for (NodeIndex p : cpts_.at(i).parents) {
        rows *= levels_.at(p).size();
    }
    return rows;
}

std::span<const double> DiscreteBn::row(NodeIndex i, std::size_t configuration) const {
    const std::size_t card = levels_.at(i).size();
    return std::span<const double>(cpts_.at(i).table).subspan(configuration * card, card);
}

std::vector<DiscreteVariable> DiscreteBn::variables() const {
    std::vector<DiscreteVariable> out;
    out.reserve(size());
    for (NodeIndex i = 0; i < size(); ++i) {
        out.push_back({nodes().name(i), levels_[i]});
    }
    return out;
}

std::uint64_t nparams(const DiscreteBn& bn) {
    std::uint64_t total = 0;
    for (NodeIndex i = 0; i < bn.size(); ++i) {
        total += static_cast<std::uint64_t>(bn.cardinality(i) - 1) * bn.num_configurations(i);
    }
    return total;
}

DiscreteDataset sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw DataError("sample size must be at least 1");
    }
    const std::size_t m = bn.size();
    const NodeList order = bn.dag().topological_order();
    std::vector<std::vector<Level>> columns(m, std::vector<Level>(n));
    Rng rng(seed);
    for (std::size_t r = 0; r < n; ++r) {
        for (NodeIndex i : order) {
            std::size_t config = 0;
            for (NodeIndex p : bn.cpt(i).parents) {
                config = config * bn.cardinality(p) + columns[p][r];
            }
            auto probs = bn.row(i, config);
            double u = rng.uniform();
            std::size_t level = 0;
            double cumulative = probs[0];
            // the last level absorbs rounding slack in the cumulative sum
            while (u >= cumulative && level + 1 < probs.size()) {
                cumulative += probs[++level];
            }
            // zero-probability levels are never drawn, even at the boundary
            while (probs[level] == 0.0 && level > 0) {
                --level;
            }
            columns[i][r] = static_cast<Level>(level);
        }
    }
    return DiscreteDataset(bn.variables(), std::move(columns));
}

}  // namespace bnsl
