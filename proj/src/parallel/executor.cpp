#include "bnsl/executor.hpp"

#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>

#include <omp.h>

#include "bnsl/error.hpp"

namespace bnsl {

std::string_view to_string(Schedule s) {
    return s == Schedule::dynamic ? "dynamic" : "static";
}

Schedule parse_schedule(std::string_view s) {
    if (s == "static") return Schedule::static_blocks;
    if (s == "dynamic") return Schedule::dynamic;
    throw ConfigError("unknown schedule '" + std::string(s) + "' (expected static or dynamic)");
}

TaskBatch partition(std::size_t size, std::size_t workers) {
    if (workers == 0) {
        throw ConfigError("at least one worker is required");
    }
    TaskBatch batch;
    batch.size = size;
    const std::size_t base = size / workers;
    const std::size_t extra = size % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        batch.ranges.emplace_back(begin, begin + len);
        begin += len;
    }
    return batch;
}

std::uint64_t PhaseReport::total_tests() const {
    std::uint64_t total = 0;
    for (const auto& w : workers) total += w.test_count;
    return total;
}

std::vector<std::uint64_t> PhaseReport::test_counts() const {
    std::vector<std::uint64_t> out;
    out.reserve(workers.size());
    for (const auto& w : workers) out.push_back(w.test_count);
    return out;
}

namespace {

struct FailureSlot {
    std::mutex mutex;
    std::optional<std::size_t> item;
    std::string message;
    std::atomic<bool> abort{false};

    void record(std::size_t i, std::string what) {
        std::lock_guard lock(mutex);
        if (!item || i < *item) {
            item = i;
            message = std::move(what);
        }
        abort.store(true, std::memory_order_relaxed);
    }
};

// Stands in for `test` when a phase runs no tests; calling it is an error.
class NullTest final : public CiTest {
public:
    NullTest() : CiTest(NodeTable{}, 0.5) {}
    std::string_view name() const override { return "none"; }

protected:
    TestOutcome compute(NodeIndex, NodeIndex, std::span<const NodeIndex>) const override { return {}; }
};

const CiTest& or_null(const CiTest* test) {
    static const NullTest none;
    return test ? *test : none;
}

// Runs one item; false once the phase is aborting.
bool run_item(std::size_t i, TestSession& session, const TaskFn& fn, WorkerReport& report, FailureSlot& failure) {
    if (failure.abort.load(std::memory_order_relaxed)) {
        return false;
    }
    try {
        fn(i, session);
        report.items.push_back(i);
    } catch (const std::exception& e) {
        failure.record(i, e.what());
    } catch (...) {
        failure.record(i, "unknown error");
    }
    return true;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PhaseReport run_phase(const TaskBatch& batch, Schedule schedule, const CiTest* test, const TaskFn& fn) {
    const std::size_t k = batch.workers();
    if (k == 0) {
        throw ConfigError("at least one worker is required");
    }
    const auto start = std::chrono::steady_clock::now();
    PhaseReport report;
    report.workers.resize(k);
    std::vector<TestSession> sessions(k, TestSession(or_null(test)));
    for (std::size_t w = 0; w < k; ++w) {
        report.workers[w].worker = w;
    }
    FailureSlot failure;
    std::atomic<std::size_t> next{0};

    const int max_threads = static_cast<int>(std::min<std::size_t>(k, std::numeric_limits<int>::max()));
    const int saved_dynamic = omp_get_dynamic();
    omp_set_dynamic(0);
#pragma omp parallel num_threads(max_threads)
    {
        const auto lanes = static_cast<std::size_t>(omp_get_num_threads());
        // if the runtime granted fewer threads, each thread serves several worker lanes
        for (auto w = static_cast<std::size_t>(omp_get_thread_num()); w < k; w += lanes) {
            WorkerReport& wr = report.workers[w];
            TestSession& session = sessions[w];
            if (schedule == Schedule::static_blocks) {
                for (std::size_t i = batch.ranges[w].first; i < batch.ranges[w].second; ++i) {
                    if (!run_item(i, session, fn, wr, failure)) break;
                }
            } else {
                for (std::size_t i = next.fetch_add(1); i < batch.size; i = next.fetch_add(1)) {
                    if (!run_item(i, session, fn, wr, failure)) break;
                }
            }
        }
    }
    omp_set_dynamic(saved_dynamic);

    for (std::size_t w = 0; w < k; ++w) {
        report.workers[w].test_count = sessions[w].counter().count();
    }
    report.seconds = seconds_since(start);
    if (failure.item) {
        throw PhaseError(*failure.item, failure.message);
    }
    return report;
}

PhaseReport run_phase_serial(std::size_t size, const CiTest* test, const TaskFn& fn) {
    const auto start = std::chrono::steady_clock::now();
    PhaseReport report;
    report.workers.resize(1);
    TestSession session(or_null(test));
    FailureSlot failure;
    for (std::size_t i = 0; i < size; ++i) {
        if (!run_item(i, session, fn, report.workers[0], failure)) break;
    }
    report.workers[0].test_count = session.counter().count();
    report.seconds = seconds_since(start);
    if (failure.item) {
        throw PhaseError(*failure.item, failure.message);
    }
    return report;
}

std::map<std::size_t, NormalizedTime> normalized_running_time(const std::map<std::size_t, double>& seconds) {
    auto base = seconds.find(1);
    if (base == seconds.end()) {
        throw ConfigError("normalised running times need a 1-worker baseline");
    }
    if (!(base->second > 0.0)) {
        throw ConfigError("the 1-worker baseline time must be positive");
    }
    std::map<std::size_t, NormalizedTime> out;
    for (auto [k, t] : seconds) {
        if (k == 0) {
            throw ConfigError("worker counts must be at least 1");
        }
        NormalizedTime nt;
        nt.ratio = k == 1 ? 1.0 : t / base->second;
        nt.overhead = k == 1 ? 0.0 : nt.ratio - 1.0 / static_cast<double>(k);
        out.emplace(k, nt);
    }
    return out;
}

}  // namespace bnsl
