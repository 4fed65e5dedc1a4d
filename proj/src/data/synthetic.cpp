#include "bnsl/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.below(i)]);
    }
}

std::string padded(const std::string& prefix, std::size_t i, std::size_t n) {
    std::string digits = std::to_string(i + 1);
    const std::size_t width = std::to_string(n).size();
    return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

Dag random_dag(const RandomDagSpec& spec, Rng& rng) {
    const std::size_t n = spec.nodes;
    if (n == 0) {
        throw ConfigError("a random DAG needs at least one node");
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(padded(spec.prefix, i, n));
    Dag dag{NodeTable(names)};

    NodeList order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double q = pairs > 0 ? std::min(1.0, spec.expected_arcs / pairs) : 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        NodeList parents;
        for (std::size_t j = 0; j < k; ++j) {
            if (rng.uniform() < q) parents.push_back(order[j]);
        }
        if (parents.size() > spec.max_in_degree) {
            shuffle(parents, rng);
            parents.resize(spec.max_in_degree);
        }
        for (NodeIndex p : parents) dag.add_arc(p, order[k]);
    }
    return dag;
}

DiscreteBn random_discrete_bn(const Dag& dag, const RandomCptSpec& spec, Rng& rng) {
    if (spec.min_levels < 2 || spec.max_levels < spec.min_levels) {
        throw ConfigError("levels must satisfy 2 <= min_levels <= max_levels");
    }
    if (!(spec.floor >= 0.0 && spec.floor < 1.0)) {
        throw ConfigError("floor must be in [0, 1)");
    }
    const std::size_t n = dag.size();
    std::vector<std::vector<std::string>> levels(n);
    for (NodeIndex i = 0; i < n; ++i) {
        const std::size_t card = spec.min_levels + rng.below(spec.max_levels - spec.min_levels + 1);
        for (std::size_t l = 0; l < card; ++l) levels[i].push_back("s" + std::to_string(l));
    }
    std::vector<Cpt> cpts(n);
    for (NodeIndex i = 0; i < n; ++i) {
        cpts[i].parents = dag.parents(i);
        std::size_t rows = 1;
        for (NodeIndex p : cpts[i].parents) rows *= levels[p].size();
        const std::size_t card = levels[i].size();
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<double> row(card);
            double total = 0.0;
            for (double& v : row) {
                v = -std::log(1.0 - rng.uniform());
                total += v;
            }
            double sum = 0.0;
            for (std::size_t l = 0; l < card; ++l) {
                row[l] = spec.floor / static_cast<double>(card) + (1.0 - spec.floor) * row[l] / total;
                sum += row[l];
            }
            for (double& v : row) v /= sum;
            cpts[i].table.insert(cpts[i].table.end(), row.begin(), row.end());
        }
    }
    return DiscreteBn(dag, std::move(levels), std::move(cpts));
}

ContinuousDataset sample_linear_gaussian(const Dag& dag, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw DataError("sample size must be at least 1");
    }
    Rng rng(seed);
    const std::size_t p = dag.size();
    std::vector<std::vector<double>> weights(p);
    for (NodeIndex i = 0; i < p; ++i) {
        for (std::size_t k = 0; k < dag.parents(i).size(); ++k) {
            const double w = 0.5 + rng.uniform();
            weights[i].push_back(rng.uniform() < 0.5 ? -w : w);
        }
    }
    std::vector<std::vector<double>> columns(p, std::vector<double>(n));
    for (NodeIndex i : dag.topological_order()) {
        auto& col = columns[i];
        const auto& parents = dag.parents(i);
        for (std::size_t r = 0; r < n; ++r) {
            double v = rng.normal();
            for (std::size_t k = 0; k < parents.size(); ++k) v += weights[i][k] * columns[parents[k]][r];
            col[r] = v;
        }
        // rescale to unit variance so deep nodes do not blow up
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double v : col) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n));
        if (sd > 0.0) {
            for (double& v : col) v /= sd;
        }
    }
    return ContinuousDataset(dag.nodes().names(), std::move(columns));
}

}  // namespace bnsl
