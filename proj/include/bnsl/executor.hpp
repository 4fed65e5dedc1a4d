#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bnsl/ci_test.hpp"

namespace bnsl {

enum class Schedule { static_blocks, dynamic };

std::string_view to_string(Schedule s);
Schedule parse_schedule(std::string_view s);

/// Contiguous, balanced assignment of item positions [0, size) to workers.
struct TaskBatch {
    std::size_t size = 0;
    /// worker -> [begin, end)
    std::vector<std::pair<std::size_t, std::size_t>> ranges;

    std::size_t workers() const noexcept { return ranges.size(); }
};

/// The first (size mod k) workers get ceil(size / k) items, the rest floor.
TaskBatch partition(std::size_t size, std::size_t workers);

struct WorkerReport {
    std::size_t worker = 0;
    /// Item positions this worker executed, in execution order.
    std::vector<std::size_t> items;
    std::uint64_t test_count = 0;
};

struct PhaseReport {
    std::vector<WorkerReport> workers;
    double seconds = 0.0;

    std::uint64_t total_tests() const;
    std::vector<std::uint64_t> test_counts() const;
};

/// A task failed; the phase was drained and aborted.
class PhaseError : public std::runtime_error {
public:
    PhaseError(std::size_t item, const std::string& what)
        : std::runtime_error("task " + std::to_string(item) + " failed: " + what), item_(item) {}

    std::size_t item() const noexcept { return item_; }

private:
    std::size_t item_;
};

/// Task body: item position plus the worker's private session.
using TaskFn = std::function<void(std::size_t item, TestSession& session)>;

/**
 * Run every item of the batch on batch.workers() OpenMP lanes.
 *
 * Each lane owns a TestSession over `test` (which may be null for tasks that
 * run no tests). Tasks must only write to per-item output slots, so results
 * are merged in item order whatever order they complete in. With
 * Schedule::dynamic, idle lanes take the next unstarted item from a shared
 * counter instead of walking their static range.
 *
 * When a task throws, no new items are started, the running ones finish,
 * and PhaseError is thrown for the lowest failing item.
 */
PhaseReport run_phase(const TaskBatch& batch, Schedule schedule, const CiTest* test, const TaskFn& fn);

/// Sequential reference: one session, items in order, reported as worker 0.
PhaseReport run_phase_serial(std::size_t size, const CiTest* test, const TaskFn& fn);

/// Map items to results with run_phase; results land in item order.
template <class Result, class Fn>
std::pair<std::vector<Result>, PhaseReport> map_phase(std::size_t size, std::size_t workers,
                                                      Schedule schedule, const CiTest* test, Fn&& fn) {
    std::vector<Result> out(size);
    PhaseReport report = run_phase(partition(size, workers), schedule, test,
                                   [&](std::size_t i, TestSession& s) { out[i] = fn(i, s); });
    return {std::move(out), std::move(report)};
}

struct NormalizedTime {
    double ratio = 1.0;
    double overhead = 0.0;
};

/// ratio(k) = time(k) / time(1); overhead(k) = ratio(k) - 1/k.
std::map<std::size_t, NormalizedTime> normalized_running_time(const std::map<std::size_t, double>& seconds);

}  // namespace bnsl
