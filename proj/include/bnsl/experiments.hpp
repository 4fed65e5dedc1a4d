#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnsl/data.hpp"
#include "bnsl/io.hpp"
#include "bnsl/network.hpp"
#include "bnsl/structure.hpp"

namespace bnsl {

struct OrderExperimentSpec {
    DiscreteBn network;
    std::string network_name = "network";
    std::vector<Algorithm> algorithms{Algorithm::gs, Algorithm::inter_iamb, Algorithm::mmpc, Algorithm::si_hiton_pc};
    /// Sample sizes as multiples of nparams(network).
    std::vector<double> ratios{0.1, 0.2, 0.5, 1, 2, 5};
    std::size_t repetitions = 20;
    double alpha = 0.01;
    std::uint64_t seed = 1;
    /// "mi" or "oracle".
    std::string test = "mi";
    std::vector<Backtracking> modes{Backtracking::none, Backtracking::start_set};
    std::optional<std::size_t> max_condition_size;

    void validate() const;
};

struct OrderRow {
    std::string network;
    Algorithm algorithm;
    double ratio;
    std::size_t n;
    std::size_t rep;
    Backtracking mode;
    std::size_t hamming;
    std::uint64_t tests_original;
    std::uint64_t tests_reversed;
};

/**
 * For each ratio and repetition, sample n = round(ratio * p) rows (shared by
 * all algorithms), learn the skeleton in every mode on the data and on its
 * column-reversed copy, and compare the two skeletons.
 */
std::vector<OrderRow> run_order_experiment(const OrderExperimentSpec& spec);
CsvTable order_csv(const std::vector<OrderRow>& rows);

struct ScalingExperimentSpec {
    std::vector<Algorithm> algorithms{Algorithm::si_hiton_pc};
    /// Must contain 1.
    std::vector<std::size_t> workers{1, 2, 4};
    std::size_t repetitions = 5;
    double alpha = 0.01;
    Schedule schedule = Schedule::static_blocks;
    /// Also time start-set backtracking on one worker.
    bool include_backtracking = true;
    std::optional<std::size_t> max_condition_size;

    void validate() const;
};

struct ScalingRow {
    Algorithm algorithm;
    /// "parallel" or "start-set".
    std::string config;
    std::size_t workers;
    std::size_t rep;
    double seconds;
    std::uint64_t total_tests;
    std::vector<std::uint64_t> worker_tests;
    /// Against the 1-worker parallel run of the same repetition.
    double ratio;
    double overhead;
};

struct ScalingSummary {
    Algorithm algorithm;
    std::string config;
    std::size_t workers;
    double mean_seconds;
    double median_seconds;
    std::uint64_t total_tests;
    /// From the mean times.
    double ratio;
    double overhead;
};

struct ScalingResult {
    std::vector<ScalingRow> rows;
    std::vector<ScalingSummary> summary;
};

ScalingResult run_scaling_experiment(const CiTest& test, const ScalingExperimentSpec& spec);
/// Per-run rows then summary rows, told apart by the "kind" column.
CsvTable scaling_csv(const ScalingResult& result);

}  // namespace bnsl
