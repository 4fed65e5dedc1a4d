// Command-line front end: learning, sampling and the two benchmark protocols.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "bnsl/error.hpp"
#include "bnsl/experiments.hpp"
#include "bnsl/graph_algorithms.hpp"
#include "bnsl/io.hpp"
#include "bnsl/local_learn.hpp"
#include "bnsl/structure.hpp"

using namespace bnsl;

namespace {

// Exit codes.
constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;

std::uint64_t seed_or_env(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("BNSL_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("BNSL_SEED must be a non-negative integer");
    }
    return 1;
}

// Writes to the given file, or stdout when the path is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw DataError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// The learning inputs shared by `learn`, `learn-local` and `bench-scaling`.
struct TestOptions {
    std::string data;
    std::string network;
    std::string test = "mi";
    double alpha = 0.01;
};

// Keeps the dataset alive alongside the test that references it; heap-held
// so moving the pair does not move the data out from under the test.
struct LoadedTest {
    std::unique_ptr<Dataset> data;
    std::unique_ptr<CiTest> test;
};

LoadedTest load_test(const TestOptions& o) {
    LoadedTest out;
    if (o.test == "oracle") {
        if (o.network.empty()) throw ConfigError("--test oracle needs --network");
        Dag dag = read_network(o.network).dag();
        if (o.data.empty()) {
            out.test = std::make_unique<OracleTest>(std::move(dag));
        } else {
            // columns of the data decide the variable order
            const CsvTable table = read_csv(std::filesystem::path(o.data));
            out.test = std::make_unique<OracleTest>(std::move(dag), NodeTable(table.header));
        }
        return out;
    }
    if (o.data.empty()) throw ConfigError("--data is required for --test " + o.test);
    const CsvTable table = read_csv(std::filesystem::path(o.data));
    if (o.test == "mi") {
        std::optional<std::vector<DiscreteVariable>> declared;
        if (!o.network.empty()) declared = read_network(o.network).variables();
        out.data = std::make_unique<Dataset>(discrete_from_csv(table, declared));
        out.test = std::make_unique<MiTest>(std::get<DiscreteDataset>(*out.data), o.alpha);
    } else if (o.test == "cor") {
        out.data = std::make_unique<Dataset>(continuous_from_csv(table));
        out.test = std::make_unique<CorTest>(std::get<ContinuousDataset>(*out.data), o.alpha);
    } else {
        throw ConfigError("unknown test '" + o.test + "' (expected mi, cor or oracle)");
    }
    return out;
}

void add_test_options(CLI::App* cmd, TestOptions& o) {
    cmd->add_option("--data", o.data, "dataset CSV (header row of variable names)");
    cmd->add_option("--network", o.network, "network JSON (declared levels, or the DAG for --test oracle)");
    cmd->add_option("--test", o.test, "mi, cor or oracle")->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "significance level")->capture_default_str();
}

NodeList node_list(const NodeTable& nodes, const std::vector<std::string>& names) {
    return nodes.indices_of(names);
}

json node_names(const NodeTable& nodes, const NodeList& list) {
    json out = json::array();
    for (NodeIndex v : list) out.push_back(nodes.name(v));
    return out;
}

template <class E, class Parse>
std::vector<E> parse_all(const std::vector<std::string>& raw, Parse parse) {
    std::vector<E> out;
    for (const auto& s : raw) out.push_back(parse(s));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint-based Bayesian network structure learning"};
    app.require_subcommand(1);

    // learn
    TestOptions learn_test;
    std::string algorithm = "si-hiton-pc", backtracking = "none", schedule = "static", out_path, telemetry;
    std::size_t workers = 1;
    std::optional<std::size_t> max_cond;
    bool serial = false;
    auto* learn = app.add_subcommand("learn", "learn a CPDAG and print it as graph JSON");
    add_test_options(learn, learn_test);
    learn->add_option("--algorithm", algorithm, "gs, inter-iamb, mmpc or si-hiton-pc")->capture_default_str();
    learn->add_option("--backtracking", backtracking, "none, start-set or legacy")->capture_default_str();
    learn->add_option("--workers", workers, "parallel workers")->capture_default_str();
    learn->add_option("--schedule", schedule, "static or dynamic")->capture_default_str();
    learn->add_option("--max-condition-size", max_cond, "largest conditioning set");
    learn->add_flag("--serial", serial, "use the sequential reference executor");
    learn->add_option("--out", out_path, "output file (default stdout)");
    learn->add_option("--telemetry", telemetry, "append JSON-lines telemetry to this file");

    // learn-local
    TestOptions local_test;
    std::string node, backend = "si-hiton-pc";
    std::vector<std::string> start, whitelist, blacklist;
    auto* local = app.add_subcommand("learn-local", "learn one node's Markov blanket or neighbours");
    add_test_options(local, local_test);
    local->add_option("--node", node, "target variable")->required();
    local->add_option("--backend", backend, "gs, iamb, inter-iamb, mmpc or si-hiton-pc")->capture_default_str();
    local->add_option("--start", start, "seed members")->delimiter(',');
    local->add_option("--whitelist", whitelist, "forced members")->delimiter(',');
    local->add_option("--blacklist", blacklist, "excluded nodes")->delimiter(',');
    local->add_option("--max-condition-size", max_cond, "largest conditioning set");

    // sample
    std::string sample_network;
    std::size_t sample_n = 0;
    std::optional<std::uint64_t> seed;
    auto* sample_cmd = app.add_subcommand("sample", "forward-sample a network to CSV");
    sample_cmd->add_option("--network", sample_network, "network JSON")->required();
    sample_cmd->add_option("--n", sample_n, "rows")->required();
    sample_cmd->add_option("--seed", seed, "random seed (default $BNSL_SEED, else 1)");
    sample_cmd->add_option("--out", out_path, "output file (default stdout)");

    // nparams
    std::string np_network;
    auto* np = app.add_subcommand("nparams", "print the number of free parameters");
    np->add_option("--network", np_network, "network JSON")->required();

    // hamming
    std::string graph_a, graph_b;
    auto* ham = app.add_subcommand("hamming", "skeleton Hamming distance between two graph JSON files");
    ham->add_option("--a", graph_a, "first graph")->required();
    ham->add_option("--b", graph_b, "second graph")->required();

    // bench-order
    std::string order_network, order_test = "mi";
    std::vector<std::string> algorithms{"gs", "inter-iamb", "mmpc", "si-hiton-pc"};
    std::vector<std::string> modes{"none", "start-set"};
    std::vector<double> ratios{0.1, 0.2, 0.5, 1, 2, 5};
    std::size_t reps = 20;
    double alpha = 0.01;
    auto* order = app.add_subcommand("bench-order", "order-sensitivity experiment, CSV rows");
    order->add_option("--network", order_network, "network JSON")->required();
    order->add_option("--algorithms", algorithms, "algorithms")->delimiter(',')->capture_default_str();
    order->add_option("--modes", modes, "backtracking modes")->delimiter(',')->capture_default_str();
    order->add_option("--ratios", ratios, "sample sizes as multiples of nparams")->delimiter(',')->capture_default_str();
    order->add_option("--reps", reps, "repetitions")->capture_default_str();
    order->add_option("--alpha", alpha, "significance level")->capture_default_str();
    order->add_option("--seed", seed, "random seed (default $BNSL_SEED, else 1)");
    order->add_option("--test", order_test, "mi or oracle")->capture_default_str();
    order->add_option("--max-condition-size", max_cond, "largest conditioning set");
    order->add_option("--out", out_path, "output file (default stdout)");

    // bench-scaling
    TestOptions scale_test;
    std::vector<std::string> scale_algorithms{"si-hiton-pc"};
    std::vector<std::size_t> worker_counts{1, 2, 4};
    std::size_t scale_reps = 5, scale_n = 0;
    bool no_backtracking = false;
    auto* scale = app.add_subcommand("bench-scaling", "running times against worker count, CSV rows");
    add_test_options(scale, scale_test);
    scale->add_option("--n", scale_n, "sample this many rows from --network instead of reading --data");
    scale->add_option("--seed", seed, "sampling seed (default $BNSL_SEED, else 1)");
    scale->add_option("--algorithms", scale_algorithms, "algorithms")->delimiter(',')->capture_default_str();
    scale->add_option("--workers", worker_counts, "worker counts, must include 1")->delimiter(',')->capture_default_str();
    scale->add_option("--reps", scale_reps, "repetitions")->capture_default_str();
    scale->add_option("--schedule", schedule, "static or dynamic")->capture_default_str();
    scale->add_flag("--no-backtracking", no_backtracking, "skip the start-set single-worker run");
    scale->add_option("--max-condition-size", max_cond, "largest conditioning set");
    scale->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*learn) {
            GlobalLearnConfig cfg;
            cfg.algorithm = parse_algorithm(algorithm);
            cfg.backtracking = parse_backtracking(backtracking);
            cfg.workers = workers;
            cfg.schedule = parse_schedule(schedule);
            cfg.max_condition_size = max_cond;
            cfg.serial_reference = serial;
            cfg.validate();
            const LoadedTest t = load_test(learn_test);
            const LearnResult r = learn_cpdag(*t.test, cfg);
            Output out(out_path);
            out.stream() << graph_to_json(r.cpdag).dump(2) << '\n';
            if (!telemetry.empty()) {
                std::ofstream tel(telemetry, std::ios::app);
                if (!tel) throw DataError("cannot write '" + telemetry + "'");
                write_telemetry(tel, r, cfg);
            }
        } else if (*local) {
            const LoadedTest t = load_test(local_test);
            const NodeTable& nodes = t.test->variables();
            const NodeIndex target = nodes.index_of(node);
            LocalLearnConfig cfg;
            cfg.backend = parse_local_backend(backend);
            cfg.start = node_list(nodes, start);
            cfg.whitelist = node_list(nodes, whitelist);
            cfg.blacklist = node_list(nodes, blacklist);
            cfg.max_condition_size = max_cond;
            cfg.validate(target, nodes.size());
            TestSession session(*t.test);
            const LocalResult r = is_blanket_backend(cfg.backend) ? learn_mb(target, cfg, session)
                                                                  : learn_nbr(target, cfg, session);
            const json j{{"node", node},
                         {"backend", to_string(cfg.backend)},
                         {is_blanket_backend(cfg.backend) ? "markov_blanket" : "neighbours",
                          node_names(nodes, r.members)},
                         {"tests", session.counter().count()}};
            std::cout << j.dump(2) << '\n';
        } else if (*sample_cmd) {
            const DiscreteBn bn = read_network(sample_network);
            const DiscreteDataset d = sample(bn, sample_n, seed_or_env(seed));
            Output out(out_path);
            write_csv(out.stream(), to_csv(d));
        } else if (*np) {
            std::cout << nparams(read_network(np_network)) << '\n';
        } else if (*ham) {
            const Pdag a = read_graph(graph_a), b = read_graph(graph_b);
            std::cout << hamming_skeleton(a.skeleton(), b.skeleton()) << '\n';
        } else if (*order) {
            OrderExperimentSpec spec{read_network(order_network)};
            spec.network_name = std::filesystem::path(order_network).stem().string();
            spec.algorithms = parse_all<Algorithm>(algorithms, parse_algorithm);
            spec.modes = parse_all<Backtracking>(modes, parse_backtracking);
            spec.ratios = ratios;
            spec.repetitions = reps;
            spec.alpha = alpha;
            spec.seed = seed_or_env(seed);
            spec.test = order_test;
            spec.max_condition_size = max_cond;
            const auto rows = run_order_experiment(spec);
            Output out(out_path);
            write_csv(out.stream(), order_csv(rows));
        } else if (*scale) {
            ScalingExperimentSpec spec;
            spec.algorithms = parse_all<Algorithm>(scale_algorithms, parse_algorithm);
            spec.workers = worker_counts;
            spec.repetitions = scale_reps;
            spec.alpha = scale_test.alpha;
            spec.schedule = parse_schedule(schedule);
            spec.include_backtracking = !no_backtracking;
            spec.max_condition_size = max_cond;
            spec.validate();
            LoadedTest t;
            if (scale_n > 0) {
                if (scale_test.network.empty()) throw ConfigError("--n needs --network");
                if (scale_test.test != "mi") throw ConfigError("sampling from --network gives discrete data; use --test mi");
                t.data = std::make_unique<Dataset>(sample(read_network(scale_test.network), scale_n, seed_or_env(seed)));
                t.test = std::make_unique<MiTest>(std::get<DiscreteDataset>(*t.data), scale_test.alpha);
            } else {
                t = load_test(scale_test);
            }
            const auto result = run_scaling_experiment(*t.test, spec);
            Output out(out_path);
            write_csv(out.stream(), scaling_csv(result));
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_ok;
}
