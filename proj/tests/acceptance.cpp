// Acceptance run: one PASS/FAIL/SKIP line per criterion, non-zero exit on any FAIL.
//
// Optional inputs:
//   BNSL_ALARM_JSON  path to a converted ALARM network; enables the p = 509 check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "bnsl/ci_test.hpp"
#include "bnsl/error.hpp"
#include "bnsl/experiments.hpp"
#include "bnsl/graph_algorithms.hpp"
#include "bnsl/io.hpp"
#include "bnsl/structure.hpp"
#include "bnsl/synthetic.hpp"
#include "oracles.hpp"

using namespace bnsl;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

constexpr Algorithm all_algorithms[] = {Algorithm::gs, Algorithm::inter_iamb, Algorithm::mmpc,
                                        Algorithm::si_hiton_pc};

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GlobalLearnConfig config(Algorithm a, std::size_t workers = 1) {
    GlobalLearnConfig c;
    c.algorithm = a;
    c.workers = workers;
    return c;
}

DiscreteBn synthetic_bn(std::uint64_t seed, std::size_t nodes, double arcs, std::size_t max_levels) {
    Rng rng(seed);
    RandomDagSpec spec;
    spec.nodes = nodes;
    spec.expected_arcs = arcs;
    RandomCptSpec cpt;
    cpt.max_levels = max_levels;
    return random_discrete_bn(random_dag(spec, rng), cpt, rng);
}

// 1. Oracle exact recovery.
Outcome oracle_recovery() {
    std::size_t cases = 0, matched = 0;
    Rng sizes(101);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + sizes.below(9);
        const Dag d = oracle::small_dag(Rng::derive(1, {seed}), n, 3);
        const OracleTest test(d);
        const Pdag truth = dag_to_cpdag(d);
        for (Algorithm a : all_algorithms) {
            ++cases;
            matched += learn_cpdag(test, config(a)).cpdag == truth;
        }
    }
    return {matched == cases ? Verdict::pass : Verdict::fail,
            std::to_string(matched) + "/" + std::to_string(cases) + " (200 DAGs x 4 algorithms)"};
}

// 2. Parallel determinism and counter conservation.
Outcome parallel_determinism() {
    const DiscreteBn bn = synthetic_bn(202, 50, 60, 3);
    const DiscreteDataset data = sample(bn, 5000, 2);
    const MiTest test(data, 0.01);
    std::size_t bad = 0;
    std::ostringstream totals;
    for (Algorithm a : all_algorithms) {
        const LearnResult base = learn_cpdag(test, config(a, 1));
        totals << to_string(a) << "=" << base.total_tests() << " ";
        for (std::size_t k : {2u, 4u, 8u}) {
            const LearnResult r = learn_cpdag(test, config(a, k));
            std::uint64_t per_worker = 0;
            for (const auto& p : r.phases)
                for (auto c : p.worker_tests) per_worker += c;
            if (!(r.cpdag == base.cpdag) || per_worker != base.total_tests()) ++bad;
        }
    }
    return {bad == 0 ? Verdict::pass : Verdict::fail,
            std::to_string(bad) + " mismatching runs of 12; k=1 tests: " + totals.str()};
}

// Shared setup of criteria 3 to 5: 20 datasets at n = 2p from a 37-node network.
const std::vector<OrderRow>& order_rows() {
    static const std::vector<OrderRow> rows = [] {
        OrderExperimentSpec spec{synthetic_bn(303, 37, 46, 4)};
        spec.network_name = "synthetic37";
        spec.ratios = {2};
        spec.repetitions = 20;
        spec.seed = 3;
        return run_order_experiment(spec);
    }();
    return rows;
}

// 3. Order invariance without backtracking.
Outcome order_invariance() {
    std::size_t total = 0, zero = 0;
    for (const auto& r : order_rows()) {
        if (r.mode != Backtracking::none) continue;
        ++total;
        zero += r.hamming == 0;
    }
    return {zero == total ? Verdict::pass : Verdict::fail,
            std::to_string(zero) + "/" + std::to_string(total) + " zero distances, n = " +
                std::to_string(order_rows().front().n)};
}

// 4. Backtracking variability.
Outcome backtracking_variability() {
    std::size_t wins = 0;
    std::ostringstream detail;
    for (Algorithm a : all_algorithms) {
        double sum_none = 0, sum_start = 0;
        std::map<std::size_t, int> hist;
        std::size_t count = 0;
        for (const auto& r : order_rows()) {
            if (r.algorithm != a) continue;
            if (r.mode == Backtracking::none) {
                sum_none += static_cast<double>(r.hamming);
                ++count;
            } else {
                sum_start += static_cast<double>(r.hamming);
                ++hist[r.hamming];
            }
        }
        const double mn = sum_none / static_cast<double>(count), ms = sum_start / static_cast<double>(count);
        wins += ms >= mn;
        detail << to_string(a) << " none=" << fmt(mn) << " start-set=" << fmt(ms) << " {";
        for (auto [h, c] : hist) detail << h << ":" << c << " ";
        detail << "} ";
    }
    return {wins >= 3 ? Verdict::pass : Verdict::fail, std::to_string(wins) + "/4 algorithms; " + detail.str()};
}

// 5. Backtracking test savings.
Outcome backtracking_savings() {
    // key: algorithm, rep
    std::map<std::pair<Algorithm, std::size_t>, std::pair<const OrderRow*, const OrderRow*>> pairs;
    for (const auto& r : order_rows()) {
        auto& slot = pairs[{r.algorithm, r.rep}];
        (r.mode == Backtracking::none ? slot.first : slot.second) = &r;
    }
    std::size_t violations = 0, runs = 0;
    double ratio_sum = 0;
    std::map<Algorithm, double> per_algorithm;
    for (const auto& [key, p] : pairs) {
        for (int side = 0; side < 2; ++side) {
            const double none = static_cast<double>(side ? p.first->tests_reversed : p.first->tests_original);
            const double start = static_cast<double>(side ? p.second->tests_reversed : p.second->tests_original);
            violations += start > none;
            ratio_sum += start / none;
            per_algorithm[key.first] += start / none / 40.0;
            ++runs;
        }
    }
    const double mean = ratio_sum / static_cast<double>(runs);
    std::ostringstream detail;
    detail << violations << " datasets with more tests; mean ratio " << fmt(mean) << " (target <= 0.9);";
    for (auto [a, m] : per_algorithm) detail << " " << to_string(a) << "=" << fmt(m);
    return {violations == 0 && mean <= 0.9 ? Verdict::pass : Verdict::fail, detail.str()};
}

// 6. Statistic correctness against brute-force oracles.
Outcome statistic_correctness() {
    Rng rng(606);
    double worst = 0;
    std::size_t bad = 0;
    for (int c = 0; c < 250; ++c) {
        // x, y and one optional stratum variable, each with 2 to 4 levels
        const std::size_t p = 2 + rng.below(2);
        std::vector<DiscreteVariable> vars;
        std::vector<std::vector<Level>> cols;
        const std::size_t n = 30 + rng.below(500);
        for (std::size_t v = 0; v < p; ++v) {
            const std::size_t card = 2 + rng.below(3);
            DiscreteVariable dv{"V" + std::to_string(v), {}};
            for (std::size_t l = 0; l < card; ++l) dv.levels.push_back(std::to_string(l));
            vars.push_back(dv);
            std::vector<Level> col(n);
            for (std::size_t r = 0; r < n; ++r) {
                col[r] = static_cast<Level>(rng.below(card));
                if (v > 0 && rng.below(2) == 0) col[r] = static_cast<Level>(cols[0][r] % card);
            }
            cols.push_back(col);
        }
        const DiscreteDataset d(vars, cols);
        const MiTest test(d, 0.05);
        NodeList z;
        if (p == 3) z.push_back(2);
        const TestOutcome o = test.test(0, 1, z);
        const double g2 = oracle::g2_direct(d, 0, 1, z);
        const double pv = oracle::chi2_upper(g2, static_cast<int>(o.dof));
        const double err = std::max(std::abs(o.statistic - g2), std::abs(o.p_value - pv));
        worst = std::max(worst, err);
        bad += err > 1e-9;
    }
    for (int c = 0; c < 250; ++c) {
        const std::size_t k = rng.below(4);  // |z| <= 3
        const std::size_t p = 2 + k;
        const std::size_t n = 10 + rng.below(300);
        std::vector<std::vector<double>> cols(p, std::vector<double>(n));
        for (std::size_t r = 0; r < n; ++r) {
            const double shared = rng.normal();
            for (std::size_t v = 0; v < p; ++v) cols[v][r] = rng.normal() + 0.7 * shared;
        }
        std::vector<std::string> names;
        for (std::size_t v = 0; v < p; ++v) names.push_back("v" + std::to_string(v));
        const ContinuousDataset d(names, cols);
        const CorTest test(d, 0.05);
        NodeList z;
        for (NodeIndex v = 2; v < p; ++v) z.push_back(v);
        const TestOutcome o = test.test(0, 1, z);
        const double r = oracle::partial_inverse(cols, 0, 1, z);
        const double dof = static_cast<double>(n - k - 2);
        const double t = r * std::sqrt(dof / (1 - r * r));
        const double pv = oracle::t_two_sided(t, static_cast<int>(dof));
        const double err = std::max(std::abs(o.statistic - t), std::abs(o.p_value - pv));
        worst = std::max(worst, err);
        bad += err > 1e-9;
    }
    return {bad == 0 ? Verdict::pass : Verdict::fail,
            std::to_string(500 - bad) + "/500 within 1e-9, worst error " + fmt(worst, 3)};
}

// 7. Scaling behaviour on a 200-variable Gaussian dataset.
Outcome scaling() {
    Rng rng(707);
    RandomDagSpec spec;
    spec.nodes = 200;
    spec.expected_arcs = 250;
    const ContinuousDataset data = sample_linear_gaussian(random_dag(spec, rng), 2000, 7);
    const CorTest test(data, 0.01);
    auto timed = [&](std::size_t k) {
        const auto t0 = std::chrono::steady_clock::now();
        const LearnResult r = learn_cpdag(test, config(Algorithm::si_hiton_pc, k));
        return std::pair{seconds_since(t0), r.total_tests()};
    };
    const auto [t1, n1] = timed(1);
    const auto [t4, n4] = timed(4);
    const auto norm = normalized_running_time({{1, t1}, {4, t4}});
    const double ratio = norm.at(4).ratio;
    const unsigned cores = std::thread::hardware_concurrency();
    std::ostringstream detail;
    detail << "t1=" << fmt(t1) << "s t4=" << fmt(t4) << "s ratio(4)=" << fmt(ratio)
           << " overhead(4)=" << fmt(norm.at(4).overhead) << " tests " << n1 << "/" << n4
           << "; reference overheads 0.032-0.066 at k=8, 0.062/0.076 at k=20";
    if (cores < 4) {
        detail << "; " << cores << " core(s) available, needs >= 4";
        return {Verdict::skip, detail.str()};
    }
    const bool ok = t4 < t1 && ratio >= 0.25 && ratio <= 0.70 && n1 == n4;
    return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

// Exact marginal of one node by enumerating the joint distribution.
double exact_marginal(const DiscreteBn& bn, NodeIndex node, Level level) {
    const std::size_t m = bn.size();
    std::vector<Level> state(m, 0);
    double total = 0;
    while (true) {
        double prob = 1;
        for (NodeIndex i = 0; i < m; ++i) {
            std::size_t c = 0;
            for (NodeIndex p : bn.cpt(i).parents) c = c * bn.cardinality(p) + state[p];
            prob *= bn.row(i, c)[state[i]];
        }
        if (state[node] == level) total += prob;
        std::size_t i = 0;
        while (i < m && ++state[i] == bn.cardinality(i)) state[i++] = 0;
        if (i == m) break;
    }
    return total;
}

// 8. Sampling fidelity.
Outcome sampling_fidelity() {
    std::vector<DiscreteBn> nets;
    {
        Dag d{NodeTable({"A", "B"})};
        d.add_arc("A", "B");
        nets.emplace_back(d, std::vector<std::vector<std::string>>{{"a0", "a1"}, {"b0", "b1"}},
                          std::vector<Cpt>{{{}, {0.35, 0.65}}, {{0}, {0.9, 0.1, 0.25, 0.75}}});
    }
    {
        Dag d{NodeTable({"X", "Y", "Z"})};
        d.add_arc("Y", "X");
        d.add_arc("Z", "X");
        nets.emplace_back(d, std::vector<std::vector<std::string>>{{"x0", "x1", "x2"}, {"y0", "y1"}, {"z0", "z1"}},
                          std::vector<Cpt>{{{1, 2}, {0.1, 0.6, 0.3, 0.2, 0.2, 0.6, 0.5, 0.25, 0.25, 0.8, 0.1, 0.1}},
                                           {{}, {0.3, 0.7}},
                                           {{}, {0.55, 0.45}}});
    }
    nets.push_back(synthetic_bn(808, 5, 5, 3));

    // the checked node is the last one in topological order, i.e. the deepest
    std::vector<std::pair<NodeIndex, double>> target;
    for (const auto& bn : nets) {
        const NodeIndex v = bn.dag().topological_order().back();
        target.emplace_back(v, exact_marginal(bn, v, 0));
    }
    const std::size_t n = 50000;
    int passed = 0;
    std::vector<int> per_network(nets.size(), 0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        bool ok = true;
        for (std::size_t k = 0; k < nets.size(); ++k) {
            const auto d = sample(nets[k], n, Rng::derive(8, {seed, k}));
            const auto [v, p] = target[k];
            double hits = 0;
            for (Level l : d.column(v)) hits += l == 0;
            const bool inside = std::abs(hits / n - p) <= 3 * std::sqrt(p * (1 - p) / n);
            per_network[k] += inside;
            ok = ok && inside;
        }
        passed += ok;
    }
    // a correct sampler leaves a 3-sigma band with probability 0.0027 per check
    const int outside = 300 - per_network[0] - per_network[1] - per_network[2];
    std::ostringstream detail;
    detail << passed << "/100 seeds pass on all 3 networks; per network " << per_network[0] << "/" << per_network[1]
           << "/" << per_network[2] << "; " << outside << " of 300 checks outside 3 sigma (0.81 expected)";
    return {passed >= 99 ? Verdict::pass : Verdict::fail, detail.str()};
}

// 9. nparams conformance.
Outcome nparams_conformance() {
    Dag d{NodeTable({"X", "Y", "Z"})};
    d.add_arc("Y", "X");
    d.add_arc("Z", "X");
    const DiscreteBn bn(d, {{"x0", "x1", "x2"}, {"y0", "y1"}, {"z0", "z1"}},
                        {{{1, 2}, std::vector<double>(12, 1.0 / 3)}, {{}, {0.5, 0.5}}, {{}, {0.5, 0.5}}});
    // (3 - 1) * 2 * 2 + (2 - 1) + (2 - 1)
    const std::uint64_t formula = 2 * 4 + 1 + 1;
    const std::uint64_t got = nparams(bn);
    std::string detail = "3-node network " + std::to_string(got) + " (formula " + std::to_string(formula) + ")";
    bool ok = got == formula;
    if (const char* alarm = std::getenv("BNSL_ALARM_JSON")) {
        const std::uint64_t p = nparams(read_network(alarm));
        detail += "; ALARM " + std::to_string(p) + " (expected 509)";
        ok = ok && p == 509;
    } else {
        detail += "; ALARM check not run (BNSL_ALARM_JSON unset)";
    }
    return {ok ? Verdict::pass : Verdict::fail, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, oracle_recovery},         {2, parallel_determinism}, {3, order_invariance},
        {4, backtracking_variability}, {5, backtracking_savings}, {6, statistic_correctness},
        {7, scaling},                  {8, sampling_fidelity},   {9, nparams_conformance},
    };
    int failures = 0;
    for (const auto& [id, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("threw: ") + e.what()};
        }
        const char* label = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
        failures += o.verdict == Verdict::fail;
        std::cout << "criterion " << id << ": " << label << " [" << fmt(seconds_since(t0), 3) << "s] " << o.detail
                  << std::endl;
    }
    std::cout << "acceptance summary: " << failures << " failing criteria" << std::endl;
    return failures == 0 ? 0 : 1;
}
