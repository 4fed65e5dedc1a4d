#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bnsl/io.hpp"
#include "bnsl/synthetic.hpp"

using namespace bnsl;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("bnsl_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
        Rng rng(21);
        RandomDagSpec spec;
        spec.nodes = 8;
        spec.expected_arcs = 9;
        write_network(path("net.json"), random_discrete_bn(random_dag(spec, rng), {}, rng));
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Runs the CLI with stdout captured to `out`; returns the exit status.
    int run(const std::string& args, const std::string& out = "stdout.txt") const {
        const std::string cmd = std::string("'") + BNSL_CLI_PATH + "' " + args + " > '" + path(out) + "' 2> '" +
                                path("stderr.txt") + "'";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const std::string& name) const { return read_text(path(name)); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, NparamsMatchesLibrary) {
    ASSERT_EQ(run("nparams --network " + path("net.json")), 0);
    EXPECT_EQ(std::stoull(slurp("stdout.txt")), nparams(read_network(path("net.json"))));
}

TEST_F(Cli, SampleLearnAndHamming) {
    ASSERT_EQ(run("sample --network " + path("net.json") + " --n 1500 --seed 4 --out " + path("d.csv")), 0);
    const auto table = read_csv(fs::path(path("d.csv")));
    EXPECT_EQ(table.rows.size(), 1500u);

    const std::string learn = "learn --data " + path("d.csv") + " --algorithm si-hiton-pc --test mi --alpha 0.01";
    ASSERT_EQ(run(learn + " --workers 4 --telemetry " + path("t.jsonl"), "g4.json"), 0);
    ASSERT_EQ(run(learn + " --workers 1", "g1.json"), 0);
    EXPECT_EQ(slurp("g4.json"), slurp("g1.json"));
    EXPECT_NO_THROW(read_graph(path("g1.json")));
    EXPECT_NE(slurp("t.jsonl").find("\"event\":\"run\""), std::string::npos);

    ASSERT_EQ(run("hamming --a " + path("g1.json") + " --b " + path("g1.json")), 0);
    EXPECT_EQ(slurp("stdout.txt"), "0\n");
}

TEST_F(Cli, SeedFallsBackToEnvironment) {
    ASSERT_EQ(run("sample --network " + path("net.json") + " --n 50 --seed 9", "a.csv"), 0);
    ASSERT_EQ(run("sample --network " + path("net.json") + " --n 50", "b.csv"), 0);
    ::setenv("BNSL_SEED", "9", 1);
    ASSERT_EQ(run("sample --network " + path("net.json") + " --n 50", "c.csv"), 0);
    ::unsetenv("BNSL_SEED");
    EXPECT_EQ(slurp("a.csv"), slurp("c.csv"));
    EXPECT_NE(slurp("a.csv"), slurp("b.csv"));
}

TEST_F(Cli, OracleBenchOrderHasZeroHamming) {
    ASSERT_EQ(run("bench-order --network " + path("net.json") + " --test oracle --ratios 1 --reps 1", "o.csv"), 0);
    const auto t = read_csv(fs::path(path("o.csv")));
    EXPECT_EQ(t.rows.size(), 4u * 2u);
    for (const auto& row : t.rows) EXPECT_EQ(row[6], "0");
}

TEST_F(Cli, LearnLocalAndScaling) {
    ASSERT_EQ(run("sample --network " + path("net.json") + " --n 500 --seed 2 --out " + path("d.csv")), 0);
    ASSERT_EQ(run("learn-local --data " + path("d.csv") + " --node NoSuchNode --backend gs"), 2);
    const auto first = read_network(path("net.json")).nodes().name(0);
    ASSERT_EQ(run("learn-local --data " + path("d.csv") + " --node " + first + " --backend gs"), 0);
    EXPECT_NO_THROW(json::parse(slurp("stdout.txt")).at("markov_blanket"));
    ASSERT_EQ(run("bench-scaling --data " + path("d.csv") + " --workers 1,2 --reps 1", "s.csv"), 0);
    EXPECT_EQ(read_csv(fs::path(path("s.csv"))).header[0], "kind");
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("learn --no-such-flag"), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("learn --data x.csv --workers 2 --backtracking start-set"), 1);
    EXPECT_EQ(run("learn --data x.csv --algorithm pc"), 1);
    EXPECT_EQ(run("learn --data " + path("missing.csv")), 2);
    EXPECT_EQ(run("nparams --network " + path("missing.json")), 2);
    std::ofstream(path("bad.csv")) << "A,B\n1\n";
    EXPECT_EQ(run("learn --data " + path("bad.csv")), 2);
}
