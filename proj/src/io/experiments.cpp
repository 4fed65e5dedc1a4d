#include "bnsl/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <set>

#include "bnsl/error.hpp"
#include "bnsl/graph_algorithms.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

namespace {

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string join(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(v[i]);
    }
    return out;
}

std::uint64_t total_tests(const SkeletonResult& r) {
    std::uint64_t t = 0;
    for (const auto& p : r.phases) t += p.total_tests();
    return t;
}

std::unique_ptr<CiTest> order_test(const std::string& name, const DiscreteDataset& data, const DiscreteBn& bn,
                                   double alpha) {
    if (name == "oracle") return std::make_unique<OracleTest>(bn.dag(), data.nodes());
    if (name == "mi") return std::make_unique<MiTest>(data, alpha);
    throw ConfigError("the order experiment supports the mi and oracle tests, not '" + name + "'");
}

}  // namespace

void OrderExperimentSpec::validate() const {
    if (algorithms.empty()) throw ConfigError("no algorithms given");
    if (ratios.empty()) throw ConfigError("no ratios given");
    for (double r : ratios) {
        if (!(r > 0.0)) throw ConfigError("ratios must be positive");
    }
    if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
    if (modes.empty()) throw ConfigError("no backtracking modes given");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
}

std::vector<OrderRow> run_order_experiment(const OrderExperimentSpec& spec) {
    spec.validate();
    const double p = static_cast<double>(nparams(spec.network));
    std::vector<OrderRow> rows;
    for (std::size_t ri = 0; ri < spec.ratios.size(); ++ri) {
        const double ratio = spec.ratios[ri];
        const auto n = static_cast<long long>(std::llround(ratio * p));
        if (n < 1) {
            throw ConfigError("ratio " + num(ratio) + " gives an empty sample for p = " + num(p));
        }
        for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
            const std::uint64_t seed = Rng::derive(spec.seed, {ri, rep});
            const DiscreteDataset original = sample(spec.network, static_cast<std::size_t>(n), seed);
            const DiscreteDataset reversed = reverse_columns(original);
            const auto test_o = order_test(spec.test, original, spec.network, spec.alpha);
            const auto test_r = order_test(spec.test, reversed, spec.network, spec.alpha);
            for (Algorithm alg : spec.algorithms) {
                for (Backtracking mode : spec.modes) {
                    GlobalLearnConfig cfg;
                    cfg.algorithm = alg;
                    cfg.backtracking = mode;
                    cfg.max_condition_size = spec.max_condition_size;
                    const SkeletonResult a = learn_skeleton(*test_o, cfg);
                    const SkeletonResult b = learn_skeleton(*test_r, cfg);
                    rows.push_back(OrderRow{spec.network_name, alg, ratio, static_cast<std::size_t>(n), rep, mode,
                                            hamming_skeleton(a.skeleton, b.skeleton), total_tests(a),
                                            total_tests(b)});
                }
            }
        }
    }
    // algorithm-major order for readability
    std::stable_sort(rows.begin(), rows.end(), [&](const OrderRow& x, const OrderRow& y) {
        auto pos = [&](Algorithm a) {
            return std::find(spec.algorithms.begin(), spec.algorithms.end(), a) - spec.algorithms.begin();
        };
        return pos(x.algorithm) < pos(y.algorithm);
    });
    return rows;
}

CsvTable order_csv(const std::vector<OrderRow>& rows) {
    CsvTable t;
    t.header = {"network", "algorithm", "ratio", "n", "rep", "mode", "hamming", "tests_original", "tests_reversed"};
    for (const auto& r : rows) {
        t.rows.push_back({r.network, std::string(to_string(r.algorithm)), num(r.ratio), std::to_string(r.n),
                          std::to_string(r.rep), std::string(to_string(r.mode)), std::to_string(r.hamming),
                          std::to_string(r.tests_original), std::to_string(r.tests_reversed)});
    }
    return t;
}

// ---------------------------------------------------------------------------

void ScalingExperimentSpec::validate() const {
    if (algorithms.empty()) throw ConfigError("no algorithms given");
    if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
    std::set<std::size_t> distinct(workers.begin(), workers.end());
    if (distinct.size() != workers.size()) throw ConfigError("worker counts must be distinct");
    if (distinct.count(0)) throw ConfigError("worker counts must be at least 1");
    if (!distinct.count(1)) throw ConfigError("worker counts must include the 1-worker baseline");
}

ScalingResult run_scaling_experiment(const CiTest& test, const ScalingExperimentSpec& spec) {
    spec.validate();
    std::vector<std::size_t> ks = spec.workers;
    std::sort(ks.begin(), ks.end());
    ScalingResult result;
    for (Algorithm alg : spec.algorithms) {
        // config -> workers -> per-rep seconds
        std::map<std::string, std::map<std::size_t, std::vector<double>>> times;
        std::map<std::string, std::map<std::size_t, std::uint64_t>> tests;
        for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
            std::map<std::size_t, double> rep_times;
            std::vector<ScalingRow> rep_rows;
            auto run = [&](const std::string& config, std::size_t k, Backtracking mode) {
                GlobalLearnConfig cfg;
                cfg.algorithm = alg;
                cfg.workers = k;
                cfg.schedule = spec.schedule;
                cfg.backtracking = mode;
                cfg.max_condition_size = spec.max_condition_size;
                const LearnResult r = learn_cpdag(test, cfg);
                std::vector<std::uint64_t> per_worker(k, 0);
                for (const auto& ph : r.phases) {
                    for (std::size_t w = 0; w < ph.worker_tests.size() && w < k; ++w) {
                        per_worker[w] += ph.worker_tests[w];
                    }
                }
                rep_rows.push_back(ScalingRow{alg, config, k, rep, r.seconds, r.total_tests(), per_worker, 0, 0});
                times[config][k].push_back(r.seconds);
                tests[config][k] = r.total_tests();
                return r.seconds;
            };
            for (std::size_t k : ks) rep_times[k] = run("parallel", k, Backtracking::none);
            if (spec.include_backtracking) run("start-set", 1, Backtracking::start_set);

            const double base = rep_times.at(1);
            for (auto& row : rep_rows) {
                if (row.workers == 1 && row.config == "parallel") {
                    row.ratio = 1.0;
                    row.overhead = 0.0;
                } else {
                    row.ratio = base > 0.0 ? row.seconds / base : 0.0;
                    row.overhead = row.ratio - 1.0 / static_cast<double>(row.workers);
                }
            }
            result.rows.insert(result.rows.end(), rep_rows.begin(), rep_rows.end());
        }

        auto mean = [](const std::vector<double>& v) {
            return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        };
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            const std::size_t m = v.size() / 2;
            return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
        };
        std::map<std::size_t, double> means;
        for (std::size_t k : ks) means[k] = mean(times["parallel"][k]);
        const auto normalized = normalized_running_time(means);
        for (std::size_t k : ks) {
            const auto& v = times["parallel"][k];
            result.summary.push_back(ScalingSummary{alg, "parallel", k, means[k], median(v), tests["parallel"][k],
                                                    normalized.at(k).ratio, normalized.at(k).overhead});
        }
        if (spec.include_backtracking) {
            const auto& v = times["start-set"][1];
            const double m = mean(v);
            result.summary.push_back(ScalingSummary{alg, "start-set", 1, m, median(v), tests["start-set"][1],
                                                    m / means.at(1), m / means.at(1) - 1.0});
        }
    }
    return result;
}

CsvTable scaling_csv(const ScalingResult& result) {
    CsvTable t;
    t.header = {"kind",        "algorithm", "config", "workers", "rep",  "seconds", "median_seconds",
                "total_tests", "worker_tests", "ratio", "overhead"};
    for (const auto& r : result.rows) {
        t.rows.push_back({"run", std::string(to_string(r.algorithm)), r.config, std::to_string(r.workers),
                          std::to_string(r.rep), num(r.seconds), "", std::to_string(r.total_tests),
                          join(r.worker_tests), num(r.ratio), num(r.overhead)});
    }
    for (const auto& s : result.summary) {
        t.rows.push_back({"summary", std::string(to_string(s.algorithm)), s.config, std::to_string(s.workers), "",
                          num(s.mean_seconds), num(s.median_seconds), std::to_string(s.total_tests), "",
                          num(s.ratio), num(s.overhead)});
    }
    return t;
}

}  // namespace bnsl
