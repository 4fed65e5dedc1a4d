#include "bnsl/local_learn.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "bnsl/error.hpp"

namespace bnsl {

std::string_view to_string(LocalBackend b) {
    switch (b) {
        case LocalBackend::gs: return "gs";
        case LocalBackend::iamb: return "iamb";
        case LocalBackend::inter_iamb: return "inter-iamb";
        case LocalBackend::mmpc: return "mmpc";
        case LocalBackend::si_hiton_pc: return "si-hiton-pc";
    }
    return "?";
}

LocalBackend parse_local_backend(std::string_view s) {
    for (auto b : {LocalBackend::gs, LocalBackend::iamb, LocalBackend::inter_iamb, LocalBackend::mmpc,
                   LocalBackend::si_hiton_pc}) {
        if (s == to_string(b)) return b;
    }
    throw ConfigError("unknown backend '" + std::string(s) + "'");
}

bool is_blanket_backend(LocalBackend b) {
    return b == LocalBackend::gs || b == LocalBackend::iamb || b == LocalBackend::inter_iamb;
}

void LocalLearnConfig::validate(NodeIndex target, std::size_t num_variables) const {
    if (target >= num_variables) {
        throw ConfigError("target out of range");
    }
    auto check = [&](const NodeList& set, const char* what) {
        for (NodeIndex v : set) {
            if (v >= num_variables) {
                throw ConfigError(std::string(what) + " contains an out-of-range variable");
            }
            if (v == target) {
                throw ConfigError(std::string(what) + " contains the target");
            }
        }
    };
    check(start, "start set");
    check(whitelist, "whitelist");
    check(blacklist, "blacklist");
    if (candidates) check(*candidates, "candidate set");
    auto overlaps = [](const NodeList& a, const NodeList& b) {
        return std::any_of(a.begin(), a.end(),
                           [&](NodeIndex v) { return std::find(b.begin(), b.end(), v) != b.end(); });
    };
    if (overlaps(whitelist, blacklist)) {
        throw ConfigError("whitelist and blacklist overlap");
    }
    if (overlaps(start, blacklist)) {
        throw ConfigError("start set and blacklist overlap");
    }
}

void SepsetTable::record(NodeIndex a, NodeIndex b, NodeList set) {
    entries_[key(a, b)] = SepsetEntry{true, std::move(set)};
}

void SepsetTable::record_none(NodeIndex a, NodeIndex b) {
    entries_[key(a, b)] = SepsetEntry{false, {}};
}

void SepsetTable::erase(NodeIndex a, NodeIndex b) {
    entries_.erase(key(a, b));
}

void SepsetTable::merge(const SepsetTable& other) {
    for (const auto& [k, v] : other.entries_) {
        entries_.emplace(k, v);
    }
}

const SepsetEntry* SepsetTable::find(NodeIndex a, NodeIndex b) const {
    auto it = entries_.find(key(a, b));
    return it == entries_.end() ? nullptr : &it->second;
}

namespace {

/// Per-invocation working state shared by all backends.
class LocalSearch {
public:
    LocalSearch(NodeIndex target, const LocalLearnConfig& cfg, TestSession& session)
        : target_(target), cfg_(cfg), session_(session), nodes_(session.variables()) {
        cfg.validate(target, nodes_.size());
        const std::size_t n = nodes_.size();
        forced_.assign(n, 0);
        banned_.assign(n, 0);
        in_current_.assign(n, 0);
        for (NodeIndex v : cfg.blacklist) banned_[v] = 1;
        for (NodeIndex v : cfg.whitelist) {
            forced_[v] = 1;
            insert(v);
        }
        for (NodeIndex v : cfg.start) insert(v);
        std::vector<std::uint8_t> allowed(n, cfg.candidates ? 0 : 1);
        if (cfg.candidates) {
            for (NodeIndex v : *cfg.candidates) allowed[v] = 1;
        }
        for (NodeIndex v : nodes_.canonical_order()) {
            if (v != target && allowed[v] && !banned_[v] && !forced_[v]) {
                candidates_.push_back(v);
            }
        }
        cap_ = cfg.max_condition_size.value_or(std::numeric_limits<std::size_t>::max());
    }

    TestOutcome test(NodeIndex v, std::span<const NodeIndex> z) { return session_(target_, v, z); }

    /// True when outcome a (for variable va) is a stronger association than b (for vb).
    bool stronger(const TestOutcome& a, NodeIndex va, const TestOutcome& b, NodeIndex vb) const {
        if (a.p_value != b.p_value) return a.p_value < b.p_value;
        const double sa = std::abs(a.statistic), sb = std::abs(b.statistic);
        if (sa != sb) return sa > sb;
        return nodes_.canonical_less(va, vb);
    }

    void insert(NodeIndex v) {
        if (in_current_[v]) return;
        in_current_[v] = 1;
        current_.insert(std::upper_bound(current_.begin(), current_.end(), v,
                                         [this](NodeIndex a, NodeIndex b) { return nodes_.canonical_less(a, b); }),
                        v);
    }

    void remove(NodeIndex v) {
        if (!in_current_[v]) return;
        in_current_[v] = 0;
        current_.erase(std::find(current_.begin(), current_.end(), v));
    }

    NodeList current_without(NodeIndex v) const {
        NodeList out;
        out.reserve(current_.size());
        for (NodeIndex u : current_) {
            if (u != v) out.push_back(u);
        }
        return out;
    }

    /// One canonical pass removing members independent of the target given the rest.
    bool shrink_pass() {
        bool removed = false;
        const NodeList members = current_;
        for (NodeIndex m : members) {
            if (forced_[m]) continue;
            NodeList rest = current_without(m);
            if (rest.size() > cap_) continue;
            if (test(m, rest).independent) {
                remove(m);
                sepsets_.record(target_, m, std::move(rest));
                removed = true;
            }
        }
        return removed;
    }

    void shrink_to_fixpoint() {
        while (shrink_pass()) {
        }
    }

    /// Remove any non-forced member separated from the target by a subset of the others.
    void backward_pass(const std::vector<std::uint8_t>& marginal_known) {
        const NodeList members = current_;
        for (NodeIndex m : members) {
            if (forced_[m]) continue;
            const NodeList pool = current_without(m);
            NodeList found;
            const bool separated = for_each_subset(pool, marginal_known[m] ? 1 : 0, cap_, [&](auto z) {
                if (test(m, z).independent) {
                    found.assign(z.begin(), z.end());
                    return true;
                }
                return false;
            });
            if (separated) {
                remove(m);
                sepsets_.record(target_, m, std::move(found));
            }
        }
    }

    LocalResult finish() {
        for (NodeIndex m : current_) sepsets_.erase(target_, m);
        return LocalResult{current_, std::move(sepsets_)};
    }

    NodeIndex target_;
    const LocalLearnConfig& cfg_;
    TestSession& session_;
    const NodeTable& nodes_;
    std::vector<std::uint8_t> forced_;
    std::vector<std::uint8_t> banned_;
    std::vector<std::uint8_t> in_current_;
    NodeList current_;
    NodeList candidates_;
    std::size_t cap_ = 0;
    SepsetTable sepsets_;
};

LocalResult grow_shrink(LocalSearch& s) {
    bool added = true;
    while (added) {
        added = false;
        for (NodeIndex c : s.candidates_) {
            if (s.in_current_[c]) continue;
            if (s.current_.size() > s.cap_) break;
            TestOutcome o = s.test(c, s.current_);
            if (o.independent) {
                s.sepsets_.record(s.target_, c, s.current_);
            } else {
                s.insert(c);
                added = true;
            }
        }
    }
    s.shrink_to_fixpoint();
    return s.finish();
}

LocalResult incremental_association(LocalSearch& s, bool interleaved) {
    std::set<NodeList> seen;
    seen.insert(s.current_);
    while (s.current_.size() <= s.cap_) {
        std::optional<std::pair<NodeIndex, TestOutcome>> best;
        for (NodeIndex c : s.candidates_) {
            if (s.in_current_[c]) continue;
            TestOutcome o = s.test(c, s.current_);
            if (o.independent) {
                s.sepsets_.record(s.target_, c, s.current_);
            }
            if (!best || s.stronger(o, c, best->second, best->first)) {
                best.emplace(c, o);
            }
        }
        if (!best || best->second.independent) {
            break;
        }
        s.insert(best->first);
        if (interleaved) {
            s.shrink_pass();
        }
        // Inter-IAMB can cycle on noisy data; stop at the first repeated state
        if (!seen.insert(s.current_).second) {
            break;
        }
    }
    s.shrink_to_fixpoint();
    return s.finish();
}

LocalResult max_min_parents_children(LocalSearch& s) {
    struct Live {
        NodeIndex node;
        TestOutcome weakest;  // minimum association over the subsets tried so far
        bool tested = false;
    };
    std::vector<Live> live;
    for (NodeIndex c : s.candidates_) {
        if (!s.in_current_[c]) live.push_back({c, {}, false});
    }
    std::vector<std::uint8_t> marginal_known(s.nodes_.size(), 0);

    // tests c against subsets of the current set that contain `must` (if any)
    auto update = [&](Live& l, std::optional<NodeIndex> must) -> bool {
        NodeList pool = must ? s.current_without(*must) : s.current_;
        const std::size_t room = must ? (s.cap_ == 0 ? 0 : s.cap_ - 1) : s.cap_;
        if (must && s.cap_ == 0) return false;
        NodeList z;
        return for_each_subset(pool, 0, room, [&](auto sub) {
            z.assign(sub.begin(), sub.end());
            if (must) {
                z.push_back(*must);
                s.nodes_.sort_canonical(z);
            }
            TestOutcome o = s.test(l.node, z);
            if (z.empty()) marginal_known[l.node] = 1;
            if (!l.tested || s.stronger(l.weakest, l.node, o, l.node)) {
                l.weakest = o;
                l.tested = true;
            }
            if (o.independent) {
                s.sepsets_.record(s.target_, l.node, z);
                return true;
            }
            return false;
        });
    };

    std::optional<NodeIndex> added;
    while (!live.empty()) {
        std::vector<Live> kept;
        for (Live& l : live) {
            if (!update(l, added)) kept.push_back(l);
        }
        live = std::move(kept);
        if (live.empty()) break;
        auto best = std::min_element(live.begin(), live.end(), [&](const Live& a, const Live& b) {
            return s.stronger(a.weakest, a.node, b.weakest, b.node);
        });
        // every live candidate is dependent given all subsets tried, so it qualifies
        added = best->node;
        s.insert(best->node);
        live.erase(best);
    }
    s.backward_pass(marginal_known);
    return s.finish();
}

LocalResult semi_interleaved_hiton_pc(LocalSearch& s) {
    std::vector<std::uint8_t> marginal_known(s.nodes_.size(), 0);
    std::vector<std::pair<NodeIndex, TestOutcome>> ranked;
    for (NodeIndex c : s.candidates_) {
        if (s.in_current_[c]) continue;
        TestOutcome o = s.test(c, {});
        marginal_known[c] = 1;
        if (o.independent) {
            s.sepsets_.record(s.target_, c, {});
        } else {
            ranked.emplace_back(c, o);
        }
    }
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        return s.stronger(a.second, a.first, b.second, b.first);
    });
    for (const auto& [c, outcome] : ranked) {
        s.insert(c);
        const NodeList pool = s.current_without(c);
        NodeList found;
        const bool separated = for_each_subset(pool, 1, s.cap_, [&](auto z) {
            if (s.test(c, z).independent) {
                found.assign(z.begin(), z.end());
                return true;
            }
            return false;
        });
        if (separated) {
            s.remove(c);
            s.sepsets_.record(s.target_, c, std::move(found));
        }
    }
    s.backward_pass(marginal_known);
    return s.finish();
}

}  // namespace

LocalResult learn_mb(NodeIndex target, const LocalLearnConfig& cfg, TestSession& session) {
    if (!is_blanket_backend(cfg.backend)) {
        throw ConfigError("learn_mb needs gs, iamb or inter-iamb, not " + std::string(to_string(cfg.backend)));
    }
    LocalSearch s(target, cfg, session);
    switch (cfg.backend) {
        case LocalBackend::gs: return grow_shrink(s);
        case LocalBackend::iamb: return incremental_association(s, false);
        default: return incremental_association(s, true);
    }
}

LocalResult learn_nbr(NodeIndex target, const LocalLearnConfig& cfg, TestSession& session) {
    if (cfg.backend != LocalBackend::mmpc && cfg.backend != LocalBackend::si_hiton_pc) {
        throw ConfigError("learn_nbr needs mmpc or si-hiton-pc, not " + std::string(to_string(cfg.backend)));
    }
    LocalSearch s(target, cfg, session);
    return cfg.backend == LocalBackend::mmpc ? max_min_parents_children(s) : semi_interleaved_hiton_pc(s);
}

LocalResult learn_nbr_from_blankets(NodeIndex target, std::span<const NodeList> blankets,
                                    const LocalLearnConfig& cfg, TestSession& session) {
    const NodeTable& nodes = session.variables();
    if (blankets.size() != nodes.size()) {
        throw ConfigError("one Markov blanket per variable is required");
    }
    cfg.validate(target, nodes.size());
    const std::size_t cap = cfg.max_condition_size.value_or(std::numeric_limits<std::size_t>::max());
    std::vector<std::uint8_t> banned(nodes.size(), 0), forced(nodes.size(), 0);
    for (NodeIndex v : cfg.blacklist) banned[v] = 1;
    for (NodeIndex v : cfg.whitelist) forced[v] = 1;

    NodeList candidates = blankets[target];
    candidates.insert(candidates.end(), cfg.start.begin(), cfg.start.end());
    candidates.insert(candidates.end(), cfg.whitelist.begin(), cfg.whitelist.end());
    nodes.sort_canonical(candidates);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto without = [](const NodeList& set, NodeIndex v) {
        NodeList out;
        for (NodeIndex u : set) {
            if (u != v) out.push_back(u);
        }
        return out;
    };

    LocalResult result;
    for (NodeIndex y : candidates) {
        if (banned[y]) continue;
        if (forced[y]) {
            result.members.push_back(y);
            continue;
        }
        NodeList from_target = without(blankets[target], y);
        NodeList from_other = without(blankets[y], target);
        const bool target_first = nodes.canonical_less(target, y);
        NodeList& pool = from_target.size() < from_other.size()   ? from_target
                         : from_other.size() < from_target.size() ? from_other
                         : target_first                           ? from_target
                                                                  : from_other;
        nodes.sort_canonical(pool);
        NodeList found;
        const bool separated = for_each_subset(pool, 0, cap, [&](auto z) {
            if (session(target, y, z).independent) {
                found.assign(z.begin(), z.end());
                return true;
            }
            return false;
        });
        if (separated) {
            result.sepsets.record(target, y, std::move(found));
        } else {
            result.members.push_back(y);
        }
    }
    return result;
}

}  // namespace bnsl
