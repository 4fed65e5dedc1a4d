#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/data.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

struct TestOutcome {
    double statistic = 0.0;
    /// Integer-valued for the G2 test; real for the t test.
    double dof = 0.0;
    double p_value = 1.0;
    bool independent = true;
    /// Set when a degenerate or regularised computation produced the result.
    bool flagged = false;

    friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

/**
 * Conditional independence test over a fixed set of variables.
 *
 * Engines are immutable and may be shared by all workers. Before dispatching
 * to the engine, test() puts x and y in canonical (name) order and sorts z the
 * same way, so outcomes are identical under swapping x and y and under any
 * permutation of the dataset columns.
 */
class CiTest {
public:
    CiTest(NodeTable variables, double alpha);
    virtual ~CiTest() = default;

    CiTest(const CiTest&) = delete;
    CiTest& operator=(const CiTest&) = delete;

    virtual std::string_view name() const = 0;
    const NodeTable& variables() const noexcept { return variables_; }
    double alpha() const noexcept { return alpha_; }

    TestOutcome test(NodeIndex x, NodeIndex y, std::span<const NodeIndex> z) const;
    TestOutcome test(std::string_view x, std::string_view y, const std::vector<std::string>& z) const;

protected:
    /// x and y are distinct and canonically ordered; z is canonically sorted
    /// and does not contain them.
    virtual TestOutcome compute(NodeIndex x, NodeIndex y, std::span<const NodeIndex> z) const = 0;

    TestOutcome decide(double statistic, double dof, double p_value, bool flagged = false) const;
    TestOutcome vacuous(double dof, bool flagged) const;

private:
    NodeTable variables_;
    double alpha_;
};

/// Monotone count of executed tests.
class TestCounter {
public:
    std::uint64_t count() const noexcept { return count_; }
    void increment() noexcept { ++count_; }
    void reset() noexcept { count_ = 0; }

private:
    std::uint64_t count_ = 0;
};

/// A worker's handle on a shared engine, with its own private counter.
class TestSession {
public:
    explicit TestSession(const CiTest& test) : test_(&test) {}

    TestOutcome operator()(NodeIndex x, NodeIndex y, std::span<const NodeIndex> z) {
        TestOutcome out = test_->test(x, y, z);
        counter_.increment();
        return out;
    }

    const CiTest& test() const noexcept { return *test_; }
    const NodeTable& variables() const noexcept { return test_->variables(); }
    const TestCounter& counter() const noexcept { return counter_; }
    TestCounter& counter() noexcept { return counter_; }

private:
    const CiTest* test_;
    TestCounter counter_;
};

/**
 * Asymptotic chi-squared mutual information test (G2 = 2 N MI).
 *
 * Empty strata of z contribute nothing to the statistic but still count
 * towards the degrees of freedom, (|x| - 1)(|y| - 1) prod |z_k|, computed
 * from the declared cardinalities. Zero degrees of freedom give
 * independent with p = 1.
 */
class MiTest final : public CiTest {
public:
    /// `data` must outlive the test.
    MiTest(const DiscreteDataset& data, double alpha);

    std::string_view name() const override { return "mi"; }

protected:
    TestOutcome compute(NodeIndex x, NodeIndex y, std::span<const NodeIndex> z) const override;

private:
    const DiscreteDataset& data_;
};

/**
 * Exact Student's t test for (partial) correlation.
 *
 * The partial correlation comes from inverting the correlation submatrix of
 * {x, y} and z. A singular submatrix gets a 1e-12 ridge on the diagonal and
 * the outcome is flagged. n - |z| - 2 <= 0 degrees of freedom, or a
 * constant column, give independent with p = 1.
 */
class CorTest final : public CiTest {
public:
    static constexpr double ridge = 1e-12;

    CorTest(const ContinuousDataset& data, double alpha);

    std::string_view name() const override { return "cor"; }

    /// Partial correlation of x and y given z (no canonicalisation, no counter).
    double partial_correlation(NodeIndex x, NodeIndex y, std::span<const NodeIndex> z,
                               bool* regularised = nullptr) const;

protected:
    TestOutcome compute(NodeIndex x, NodeIndex y, std::span<const NodeIndex> z) const override;

private:
    double correlation(NodeIndex a, NodeIndex b) const;

    std::size_t rows_;
    // centred columns scaled to unit norm; empty when the column is constant
    std::vector<std::vector<double>> unit_;
};

/**
 * Perfect test: independent exactly when x and y are d-separated by z in
 * the DAG. Variables are matched to DAG nodes by name, so the variable
 * order may differ from the DAG's (e.g. a column-reversed dataset).
 */
class OracleTest final : public CiTest {
public:
    explicit OracleTest(Dag dag);
    OracleTest(Dag dag, NodeTable variables);

    std::string_view name() const override { return "oracle"; }
    const Dag& dag() const noexcept { return dag_; }

protected:
    TestOutcome compute(NodeIndex x, NodeIndex y, std::span<const NodeIndex> z) const override;

private:
    Dag dag_;
    std::vector<NodeIndex> to_dag_;
};

/// Build a test by name: "mi" or "cor" over `data`.
std::unique_ptr<CiTest> make_test(std::string_view name, const Dataset& data, double alpha);

}  // namespace bnsl
