#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bnsl/ci_test.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

enum class LocalBackend { gs, iamb, inter_iamb, mmpc, si_hiton_pc };

std::string_view to_string(LocalBackend b);
LocalBackend parse_local_backend(std::string_view s);
bool is_blanket_backend(LocalBackend b);

struct LocalLearnConfig {
    LocalBackend backend = LocalBackend::si_hiton_pc;
    /// Seeds of the candidate set; may be discarded like any other member.
    NodeList start;
    /// Forced members, never tested for removal.
    NodeList whitelist;
    /// Never tested against the target and never returned.
    NodeList blacklist;
    /// Largest conditioning set explored by subset searches; unlimited if unset.
    std::optional<std::size_t> max_condition_size;
    /// Restricts candidates, e.g. to a previously learned Markov blanket.
    std::optional<NodeList> candidates;

    /// Throws ConfigError on overlapping or invalid sets.
    void validate(NodeIndex target, std::size_t num_variables) const;
};

struct SepsetEntry {
    /// False marks a pair that was searched without finding a separating set.
    bool found = true;
    NodeList set;

    friend bool operator==(const SepsetEntry&, const SepsetEntry&) = default;
};

/// Separating sets keyed by unordered pair.
class SepsetTable {
public:
    using Key = std::pair<NodeIndex, NodeIndex>;

    void record(NodeIndex a, NodeIndex b, NodeList set);
    void record_none(NodeIndex a, NodeIndex b);
    void erase(NodeIndex a, NodeIndex b);
    /// Keeps existing entries; adds the missing ones from `other`.
    void merge(const SepsetTable& other);

    const SepsetEntry* find(NodeIndex a, NodeIndex b) const;
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    static Key key(NodeIndex a, NodeIndex b) { return a < b ? Key{a, b} : Key{b, a}; }

    friend bool operator==(const SepsetTable&, const SepsetTable&) = default;

private:
    std::map<Key, SepsetEntry> entries_;
};

struct LocalResult {
    /// Canonically sorted.
    NodeList members;
    SepsetTable sepsets;
};

/**
 * Markov blanket of `target` with GS, IAMB or Inter-IAMB.
 *
 * GS grows by scanning candidates in canonical order and adding any that is
 * dependent given the current set, until a full scan adds nothing; it then
 * shrinks to a fixpoint. IAMB grows by adding the most associated candidate
 * (smallest p-value, then largest statistic, then name) while it is
 * dependent, then shrinks. Inter-IAMB shrinks after every insertion.
 */
LocalResult learn_mb(NodeIndex target, const LocalLearnConfig& cfg, TestSession& session);

/**
 * Parents and children of `target` with MMPC or SI-HITON-PC.
 *
 * Every candidate rejected on the way has its separating set recorded.
 */
LocalResult learn_nbr(NodeIndex target, const LocalLearnConfig& cfg, TestSession& session);

/**
 * Neighbours of `target` given symmetric Markov blankets: a member y of
 * B(target) stays unless some subset of the smaller of B(target) \ {y} and
 * B(y) \ {target} separates them. Equal sizes pick the set of the node that
 * comes first by name, so both endpoints run the same search.
 *
 * Uses start, whitelist, blacklist and max_condition_size from `cfg`.
 */
LocalResult learn_nbr_from_blankets(NodeIndex target, std::span<const NodeList> blankets,
                                    const LocalLearnConfig& cfg, TestSession& session);

/**
 * Visit subsets of `pool` in increasing size, lexicographic by position in
 * `pool` within a size, for sizes in [min_size, max_size]. Stops early and
 * returns true when `visit` returns true.
 */
template <class Visit>
bool for_each_subset(std::span<const NodeIndex> pool, std::size_t min_size, std::size_t max_size,
                     Visit&& visit) {
    max_size = std::min(max_size, pool.size());
    NodeList subset;
    std::vector<std::size_t> idx;
    for (std::size_t size = min_size; size <= max_size; ++size) {
        idx.resize(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            subset.clear();
            for (std::size_t i : idx) subset.push_back(pool[i]);
            if (visit(std::span<const NodeIndex>(subset))) {
                return true;
            }
            // advance to the next combination
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == pool.size() - size + (i - 1)) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return false;
}

}  // namespace bnsl
