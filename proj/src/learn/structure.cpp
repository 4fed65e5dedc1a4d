#include "bnsl/structure.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>

#include "bnsl/error.hpp"

namespace bnsl {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::gs: return "gs";
        case Algorithm::inter_iamb: return "inter-iamb";
        case Algorithm::mmpc: return "mmpc";
        case Algorithm::si_hiton_pc: return "si-hiton-pc";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view s) {
    for (auto a : {Algorithm::gs, Algorithm::inter_iamb, Algorithm::mmpc, Algorithm::si_hiton_pc}) {
        if (s == to_string(a)) return a;
    }
    throw ConfigError("unknown algorithm '" + std::string(s) + "' (expected gs, inter-iamb, mmpc or si-hiton-pc)");
}

std::string_view to_string(Backtracking b) {
    switch (b) {
        case Backtracking::none: return "none";
        case Backtracking::start_set: return "start-set";
        case Backtracking::legacy: return "legacy";
    }
    return "?";
}

Backtracking parse_backtracking(std::string_view s) {
    for (auto b : {Backtracking::none, Backtracking::start_set, Backtracking::legacy}) {
        if (s == to_string(b)) return b;
    }
    throw ConfigError("unknown backtracking mode '" + std::string(s) + "' (expected none, start-set or legacy)");
}

bool uses_blankets(Algorithm a) {
    return a == Algorithm::gs || a == Algorithm::inter_iamb;
}

void GlobalLearnConfig::validate() const {
    if (workers == 0) {
        throw ConfigError("at least one worker is required");
    }
    if (backtracking != Backtracking::none && workers != 1) {
        throw ConfigError("backtracking processes nodes sequentially and needs --workers 1");
    }
}

std::uint64_t PhaseTelemetry::total_tests() const {
    std::uint64_t total = 0;
    for (auto c : worker_tests) total += c;
    return total;
}

std::uint64_t LearnResult::total_tests() const {
    std::uint64_t total = 0;
    for (const auto& p : phases) total += p.total_tests();
    return total;
}

Skeleton symmetrize(const NodeTable& nodes, std::span<const NodeList> candidates) {
    if (candidates.size() != nodes.size()) {
        throw ConfigError("one candidate set per variable is required");
    }
    const std::size_t n = nodes.size();
    std::vector<std::uint8_t> listed(n * n, 0);
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b : candidates[a]) {
            if (b >= n || b == a) {
                throw DataError("invalid candidate for '" + nodes.name(a) + "'");
            }
            listed[a * n + b] = 1;
        }
    }
    Skeleton skel(nodes);
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b = a + 1; b < n; ++b) {
            if (listed[a * n + b] && listed[b * n + a]) skel.add_edge(a, b);
        }
    }
    return skel;
}

namespace {

PhaseTelemetry telemetry(std::string name, const PhaseReport& report) {
    return PhaseTelemetry{std::move(name), report.seconds, report.test_counts()};
}

/// Map over items with the configured executor.
template <class Result, class Fn>
std::pair<std::vector<Result>, PhaseReport> run_map(std::size_t size, const GlobalLearnConfig& cfg,
                                                   const CiTest& test, Fn&& fn) {
    if (cfg.serial_reference) {
        std::vector<Result> out(size);
        PhaseReport report =
            run_phase_serial(size, &test, [&](std::size_t i, TestSession& s) { out[i] = fn(i, s); });
        return {std::move(out), std::move(report)};
    }
    return map_phase<Result>(size, cfg.workers, cfg.schedule, &test, std::forward<Fn>(fn));
}

bool contains(const NodeList& set, NodeIndex v) {
    return std::find(set.begin(), set.end(), v) != set.end();
}

/// Constraints on node i from the sets already learned for nodes 0..i-1.
LocalLearnConfig backtracked(LocalLearnConfig base, NodeIndex i, std::span<const LocalResult> earlier,
                             Backtracking mode) {
    for (NodeIndex j = 0; j < i; ++j) {
        if (contains(earlier[j].members, i)) {
            (mode == Backtracking::legacy ? base.whitelist : base.start).push_back(j);
        } else {
            base.blacklist.push_back(j);
        }
    }
    return base;
}

/**
 * One local search per node. Without backtracking this is a parallel map;
 * with it, nodes run sequentially so each sees the earlier results.
 */
template <class Search>
std::pair<std::vector<LocalResult>, PhaseReport> local_phase(std::size_t n, const GlobalLearnConfig& cfg,
                                                             const CiTest& test, const LocalLearnConfig& base,
                                                             Search&& search) {
    if (cfg.backtracking == Backtracking::none) {
        return run_map<LocalResult>(n, cfg, test,
                                    [&](std::size_t i, TestSession& s) { return search(i, base, s); });
    }
    std::vector<LocalResult> out(n);
    PhaseReport report = run_phase_serial(n, &test, [&](std::size_t i, TestSession& s) {
        out[i] = search(i, backtracked(base, i, std::span<const LocalResult>(out).first(i), cfg.backtracking), s);
    });
    return {std::move(out), std::move(report)};
}

/// Fragments in canonical node order; the first entry for a pair wins.
void merge_fragments(const NodeTable& nodes, const std::vector<LocalResult>& results, SepsetTable& into) {
    for (NodeIndex v : nodes.canonical_order()) {
        into.merge(results[v].sepsets);
    }
}

std::vector<NodeList> members_of(const Skeleton& skel) {
    std::vector<NodeList> out(skel.size());
    for (NodeIndex v = 0; v < skel.size(); ++v) {
        out[v] = skel.neighbours(v);
        skel.nodes().sort_canonical(out[v]);
    }
    return out;
}

}  // namespace

SkeletonResult learn_skeleton(const CiTest& test, const GlobalLearnConfig& cfg) {
    cfg.validate();
    const NodeTable& nodes = test.variables();
    const std::size_t n = nodes.size();
    SkeletonResult result;

    LocalLearnConfig base;
    base.max_condition_size = cfg.max_condition_size;

    std::vector<LocalResult> blanket_results;
    if (uses_blankets(cfg.algorithm)) {
        base.backend = cfg.algorithm == Algorithm::gs ? LocalBackend::gs : LocalBackend::inter_iamb;
        auto [found, report] = local_phase(n, cfg, test, base, [](NodeIndex i, const LocalLearnConfig& c,
                                                                  TestSession& s) { return learn_mb(i, c, s); });
        result.phases.push_back(telemetry("markov-blankets", report));
        std::vector<NodeList> raw(n);
        for (NodeIndex v = 0; v < n; ++v) raw[v] = found[v].members;
        result.blankets = members_of(symmetrize(nodes, raw));
        blanket_results = std::move(found);
    } else {
        base.backend = cfg.algorithm == Algorithm::mmpc ? LocalBackend::mmpc : LocalBackend::si_hiton_pc;
    }

    std::vector<LocalResult> nbr;
    if (uses_blankets(cfg.algorithm)) {
        const std::span<const NodeList> blankets(result.blankets);
        auto [found, report] =
            local_phase(n, cfg, test, base, [&](NodeIndex i, const LocalLearnConfig& c, TestSession& s) {
                return learn_nbr_from_blankets(i, blankets, c, s);
            });
        result.phases.push_back(telemetry("neighbours", report));
        nbr = std::move(found);
    } else {
        auto [found, report] = local_phase(n, cfg, test, base, [](NodeIndex i, const LocalLearnConfig& c,
                                                                  TestSession& s) { return learn_nbr(i, c, s); });
        result.phases.push_back(telemetry("neighbours", report));
        nbr = std::move(found);
    }

    result.candidates.resize(n);
    for (NodeIndex v = 0; v < n; ++v) result.candidates[v] = nbr[v].members;
    result.skeleton = symmetrize(nodes, result.candidates);

    SepsetTable merged;
    merge_fragments(nodes, nbr, merged);
    if (!blanket_results.empty()) merge_fragments(nodes, blanket_results, merged);
    for (const auto& [key, entry] : merged) {
        if (result.skeleton.adjacent(key.first, key.second)) continue;
        if (entry.found) {
            result.sepsets.record(key.first, key.second, entry.set);
        } else {
            result.sepsets.record_none(key.first, key.second);
        }
    }
    return result;
}

namespace {

struct PairTask {
    NodeIndex a;
    NodeIndex b;
    NodeList common;
};

struct PairOutcome {
    std::optional<SepsetEntry> computed;
    std::vector<VStructure> v_structures;
};

SepsetEntry search_sepset(NodeIndex a, NodeIndex b, const Skeleton& skel, std::size_t cap, TestSession& session) {
    const NodeTable& nodes = skel.nodes();
    std::set<NodeList> tried;
    for (auto [from, other] : {std::pair{a, b}, std::pair{b, a}}) {
        NodeList pool;
        for (NodeIndex v : skel.neighbours(from)) {
            if (v != other) pool.push_back(v);
        }
        nodes.sort_canonical(pool);
        NodeList found;
        const bool separated = for_each_subset(pool, 0, cap, [&](auto z) {
            NodeList key(z.begin(), z.end());
            nodes.sort_canonical(key);
            if (!tried.insert(key).second) return false;
            if (session(a, b, z).independent) {
                found = std::move(key);
                return true;
            }
            return false;
        });
        if (separated) return SepsetEntry{true, std::move(found)};
    }
    return SepsetEntry{false, {}};
}

}  // namespace

OrientationResult orient_v_structures(const Skeleton& skeleton, const SepsetTable& sepsets, const CiTest& test,
                                      const GlobalLearnConfig& cfg) {
    cfg.validate();
    const NodeTable& nodes = skeleton.nodes();
    if (!(nodes == test.variables())) {
        throw DataError("skeleton and test are over different variables");
    }
    const std::size_t cap = cfg.max_condition_size.value_or(std::numeric_limits<std::size_t>::max());
    for (const auto& [key, entry] : sepsets) {
        if (skeleton.adjacent(key.first, key.second)) {
            throw DataError("separating set recorded for adjacent pair '" + nodes.name(key.first) + "', '" +
                            nodes.name(key.second) + "'");
        }
    }

    std::vector<PairTask> tasks;
    const NodeList& order = nodes.canonical_order();
    for (std::size_t ia = 0; ia < order.size(); ++ia) {
        for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
            const NodeIndex a = order[ia], b = order[ib];
            if (skeleton.adjacent(a, b)) continue;
            NodeList common;
            for (NodeIndex k : order) {
                if (skeleton.adjacent(a, k) && skeleton.adjacent(b, k)) common.push_back(k);
            }
            if (!common.empty()) tasks.push_back({a, b, std::move(common)});
        }
    }

    GlobalLearnConfig run_cfg = cfg;
    run_cfg.backtracking = Backtracking::none;
    auto [outcomes, report] = run_map<PairOutcome>(tasks.size(), run_cfg, test, [&](std::size_t i, TestSession& s) {
        const PairTask& t = tasks[i];
        PairOutcome out;
        const SepsetEntry* known = sepsets.find(t.a, t.b);
        SepsetEntry entry = known ? *known : search_sepset(t.a, t.b, skeleton, cap, s);
        if (!known) out.computed = entry;
        if (entry.found) {
            for (NodeIndex k : t.common) {
                if (!contains(entry.set, k)) out.v_structures.push_back(make_v_structure(nodes, t.a, k, t.b));
            }
        }
        return out;
    });

    OrientationResult result;
    result.phase = telemetry("v-structures", report);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& o = outcomes[i];
        if (o.computed) {
            if (o.computed->found) {
                result.sepsets.record(tasks[i].a, tasks[i].b, o.computed->set);
            } else {
                result.sepsets.record_none(tasks[i].a, tasks[i].b);
            }
        }
        result.v_structures.insert(result.v_structures.end(), o.v_structures.begin(), o.v_structures.end());
    }
    sort_v_structures(nodes, result.v_structures);
    result.pdag = Pdag::from_skeleton(skeleton);
    result.conflicts = apply_v_structures(result.pdag, result.v_structures);
    return result;
}

LearnResult learn_cpdag(const CiTest& test, const GlobalLearnConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    SkeletonResult skel = learn_skeleton(test, cfg);
    OrientationResult orient = orient_v_structures(skel.skeleton, skel.sepsets, test, cfg);

    LearnResult result;
    result.phases = std::move(skel.phases);
    result.phases.push_back(orient.phase);

    const auto meek_start = std::chrono::steady_clock::now();
    result.cpdag = apply_meek_rules(std::move(orient.pdag), &result.meek);
    result.phases.push_back(PhaseTelemetry{
        "meek", std::chrono::duration<double>(std::chrono::steady_clock::now() - meek_start).count(), {0}});

    result.skeleton = std::move(skel.skeleton);
    result.sepsets = std::move(skel.sepsets);
    result.sepsets.merge(orient.sepsets);
    result.v_structures = std::move(orient.v_structures);
    result.conflicts = orient.conflicts;
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace bnsl
