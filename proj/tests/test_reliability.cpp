#include <cmath>

#include "bimmpp/io.hpp"
#include "bimmpp/reliability.hpp"
#include "bimmpp/threads.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bimmpp;

namespace {

ReliabilityQuery query(QueryKind kind, Vector t, Vector k,
                       std::vector<long> n = {}, double dt = 0.0,
                       double dk = 0.0) {
    ReliabilityQuery q;
    q.kind = kind;
    q.t = std::move(t);
    q.k = std::move(k);
    q.n = std::move(n);
    q.dt = dt;
    q.dk = dk;
    return q;
}

} // namespace

TEST_SUITE("reliability") {

TEST_CASE("expected counts of the exponential collapse match the rate") {
    const ReliabilityReport rep =
        estimate(testsupport::poisson_rate2(),
                 {query(QueryKind::ExpectedNT, {1.0, 2.0, 3.0}, {})}, 600, 40,
                 501);
    REQUIRE(rep.results.size() == 1);
    const auto& cells = rep.results[0].cells;
    REQUIRE(cells.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const double expected = 2.0 * (i + 1.0);
        CHECK(std::abs(cells[i].estimate - expected) <=
              3.0 * cells[i].standard_error);
        CHECK(cells[i].standard_error > 0.0);
        CHECK(*cells[i].t == doctest::Approx(i + 1.0));
    }
    // Shared paths across thresholds make the curve exactly nondecreasing.
    CHECK(cells[0].estimate <= cells[1].estimate);
    CHECK(cells[1].estimate <= cells[2].estimate);
}

TEST_CASE("zero-count probability of the exponential collapse") {
    const ReliabilityReport rep =
        estimate(testsupport::poisson_rate2(),
                 {query(QueryKind::PmfNT, {1.0}, {}, {0})}, 600, 40, 502);
    const auto& cell = rep.results[0].cells[0];
    REQUIRE(*cell.n == 0);
    CHECK(std::abs(cell.estimate - std::exp(-2.0)) <=
          3.0 * cell.standard_error);
}

TEST_CASE("count pmf over the observed support sums to one") {
    // A power-of-two replication count keeps every relative frequency exact.
    const ReliabilityReport rep =
        estimate(testsupport::poisson_rate2(),
                 {query(QueryKind::PmfNT, {2.0}, {}),
                  query(QueryKind::PmfNK, {}, {2.0})},
                 256, 40, 503);
    for (const auto& result : rep.results) {
        double total = 0.0;
        for (const auto& cell : result.cells) {
            CHECK(cell.estimate >= 0.0);
            CHECK(cell.estimate <= 1.0);
            CHECK(cell.standard_error >= 0.0);
            total += cell.estimate;
        }
        CHECK(total == 1.0);
    }
}

TEST_CASE("a vacuous distance bound reduces the joint query to the time one") {
    const ReliabilityReport rep =
        estimate(testsupport::poisson_rate2(),
                 {query(QueryKind::JointNoFailure, {1.0}, {20.0}),
                  query(QueryKind::PmfNT, {1.0}, {}, {0})},
                 600, 100, 504);
    const auto& joint = rep.results[0].cells[0];
    const auto& marg = rep.results[1].cells[0];
    const double se =
        std::max(joint.standard_error, marg.standard_error);
    CHECK(std::abs(joint.estimate - marg.estimate) <= 2.0 * se);
}

TEST_CASE("surviving the box implies surviving each side on shared paths") {
    const ReliabilityReport rep =
        estimate(testsupport::example1(),
                 {query(QueryKind::JointNoFailure, {0.5}, {0.5}),
                  query(QueryKind::PmfNT, {0.5}, {}, {0}),
                  query(QueryKind::PmfNK, {}, {0.5}, {0})},
                 400, 50, 505);
    const double joint = rep.results[0].cells[0].estimate;
    const double no_t = rep.results[1].cells[0].estimate;
    const double no_k = rep.results[2].cells[0].estimate;
    // {no failure in the box} contains both one-sided no-failure events.
    CHECK(joint >= no_t);
    CHECK(joint >= no_k);
}

TEST_CASE("joint no-failure surface is monotone on shared paths") {
    const ReliabilityReport rep =
        estimate(testsupport::example1(),
                 {query(QueryKind::JointNoFailure, {0.3, 0.6, 0.9},
                        {0.4, 0.8, 1.2})},
                 300, 60, 506);
    const auto& cells = rep.results[0].cells;
    REQUIRE(cells.size() == 9);
    auto at = [&](std::size_t i, std::size_t j) {
        return cells[i * 3 + j].estimate;
    };
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i + 1 < 3) CHECK(at(i, j) >= at(i + 1, j));
            if (j + 1 < 3) CHECK(at(i, j) >= at(i, j + 1));
        }
}

TEST_CASE("windowed no-failure cells are appended with their flag") {
    const ReliabilityReport rep =
        estimate(testsupport::poisson_rate2(),
                 {query(QueryKind::JointNoFailure, {1.0}, {2.0}, {}, 1.0, 2.0)},
                 200, 60, 507);
    const auto& cells = rep.results[0].cells;
    REQUIRE(cells.size() == 2);
    CHECK_FALSE(cells[0].future_window);
    CHECK(cells[1].future_window);
    for (const auto& cell : cells) {
        CHECK(cell.estimate >= 0.0);
        CHECK(cell.estimate <= 1.0);
    }
    // Starting from the origin can only be safer than surviving one more
    // window after already reaching it.
    CHECK(cells[0].estimate >= 0.0);
}

TEST_CASE("joint increment of the collapse tracks the marginal rate") {
    const ReliabilityReport rep =
        estimate(testsupport::poisson_rate2(),
                 {query(QueryKind::ExpectedJointIncrement, {1.0}, {10.0}, {},
                        1.0, 10.0)},
                 500, 100, 508);
    const auto& cell = rep.results[0].cells[0];
    CHECK(std::abs(cell.estimate - 2.0) <= 3.0 * cell.standard_error);
}

TEST_CASE("conditional probability cells come from pooled pairs") {
    const ReliabilityReport rep =
        estimate(testsupport::example1(),
                 {query(QueryKind::CondProbTGivenK, {1e9}, {0.7}),
                  query(QueryKind::CondProbTGivenK, {0.6}, {0.7})},
                 100, 50, 509);
    // A vacuous time bound makes the conditional exactly one.
    CHECK(rep.results[0].cells[0].estimate == 1.0);
    CHECK(rep.results[0].cells[0].standard_error == 0.0);
    const auto& cell = rep.results[1].cells[0];
    CHECK(cell.estimate > 0.0);
    CHECK(cell.estimate < 1.0);
    CHECK(cell.standard_error > 0.0);
}

TEST_CASE("an unsatisfiable condition is reported, not defaulted") {
    CHECK_THROWS_AS(
        estimate(testsupport::example1(),
                 {query(QueryKind::CondProbTGivenK, {1.0}, {1e-12})}, 50, 20,
                 510),
        EmptyCondition);
}

TEST_CASE("thresholds beyond the simulated horizon are rejected") {
    CHECK_THROWS_AS(estimate(testsupport::poisson_rate2(),
                             {query(QueryKind::ExpectedNT, {30.0}, {})}, 100,
                             20, 511),
                    HorizonTooShort);
}

TEST_CASE("queries are validated before any simulation") {
    CHECK_THROWS_AS(estimate(testsupport::example1(),
                             {query(QueryKind::ExpectedNT, {-1.0}, {})}, 10,
                             10, 1),
                    InvalidParameter);
    CHECK_THROWS_AS(estimate(testsupport::example1(),
                             {query(QueryKind::ExpectedNT, {}, {})}, 10, 10, 1),
                    InvalidParameter);
    CHECK_THROWS_AS(
        estimate(testsupport::example1(),
                 {query(QueryKind::ExpectedJointIncrement, {1.0}, {1.0})}, 10,
                 10, 1),
        InvalidParameter);
    CHECK_THROWS_AS(
        estimate(testsupport::example1(),
                 {query(QueryKind::JointNoFailure, {1.0}, {1.0}, {}, 1.0, 0.0)},
                 10, 10, 1),
        InvalidParameter);
    CHECK_THROWS_AS(estimate(testsupport::example1(),
                             {query(QueryKind::PmfNT, {1.0}, {}, {-1})}, 10,
                             10, 1),
                    InvalidParameter);
    CHECK_THROWS_AS(estimate(testsupport::example1(),
                             {query(QueryKind::ExpectedNT, {0.5}, {})}, 0, 10,
                             1),
                    InvalidParameter);
}

TEST_CASE("a single replication degrades gracefully") {
    const ReliabilityReport rep =
        estimate(testsupport::poisson_rate2(),
                 {query(QueryKind::ExpectedNT, {1.0}, {})}, 1, 50, 512);
    CHECK(rep.results[0].cells[0].standard_error == 0.0);
    CHECK(rep.replications == 1);
}

TEST_CASE("reports are identical across thread counts") {
    const std::vector<ReliabilityQuery> qs{
        query(QueryKind::ExpectedNT, {1.0, 2.0}, {}),
        query(QueryKind::JointNoFailure, {1.0}, {2.0}),
        query(QueryKind::CondProbTGivenK, {0.5}, {0.6})};
    set_max_threads(1);
    const ReliabilityReport serial =
        estimate(testsupport::example1(), qs, 80, 40, 513);
    set_max_threads(8);
    const ReliabilityReport parallel =
        estimate(testsupport::example1(), qs, 80, 40, 513);
    set_max_threads(0);
    CHECK(to_json(serial) == to_json(parallel));
}

} // TEST_SUITE
