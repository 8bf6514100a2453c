#include <doctest.h>

#include <numeric>

#include "bufstarv/sim.hpp"

using namespace bufstarv;
using namespace bufstarv::sim;

TEST_CASE("whole file prefetched never starves")
{
    for (const ArrivalModel& arr : {ArrivalModel{PoissonArrivals{}}, ArrivalModel{IppParams(0.2, 0.2)},
                                     ArrivalModel{SlotParams(1.0)}}) {
        SimConfig cfg{QueueParams::from_rho(0.5), ScenarioSpec(25, 25, arr)};
        cfg.replications = 300;
        const auto r = simulate(cfg);
        CHECK(r.histogram[0] == 300);
        CHECK(r.max_starvations_observed == 0);
    }
}

TEST_CASE("report invariants")
{
    for (const ArrivalModel& arr : {ArrivalModel{PoissonArrivals{}}, ArrivalModel{IppParams(0.1, 0.3)},
                                     ArrivalModel{SlotParams(0.8)}}) {
        SimConfig cfg{QueueParams::from_rho(0.9), ScenarioSpec(120, 7, arr)};
        cfg.replications = 700;
        cfg.master_seed = 4;
        const auto r = simulate(cfg);
        CHECK(std::accumulate(r.histogram.begin(), r.histogram.end(), Count{0}) == 700);
        CHECK(r.total_arrivals == 700 * 120);
        CHECK(r.total_departures == 700 * 120);
        CHECK(r.max_starvations_observed <= 120 / 7);
        CHECK(r.histogram.size() == 120 / 7 + 1);
        for (std::size_t j = 0; j < r.histogram.size(); ++j) {
            const double p = r.empirical_pmf(j);
            CHECK(p == static_cast<double>(r.histogram[j]) / 700.0);
            CHECK(r.standard_error(j) == doctest::Approx(std::sqrt(p * (1 - p) / 700.0)));
        }
    }
}

TEST_CASE("serial and parallel runs are identical")
{
    SimConfig cfg{QueueParams::from_rho(1.1), ScenarioSpec(300, 20)};
    cfg.replications = 1001;
    cfg.master_seed = 7;
    const auto a = simulate(cfg);
    cfg.parallel = true;
    const auto b = simulate(cfg);
    const auto c = simulate(cfg);
    CHECK(a.same_results(b));
    CHECK(b.same_results(c));
    cfg.master_seed = 8;
    CHECK_FALSE(a.same_results(simulate(cfg)));
    CHECK(replication_seed(7, 3) == replication_seed(7, 3));
    CHECK(replication_seed(7, 3) != replication_seed(7, 4));
}

TEST_CASE("resume threshold widens the starvation bound")
{
    SimConfig cfg{QueueParams::from_rho(0.6), ScenarioSpec(40, 4)};
    cfg.replications = 200;
    cfg.resume_threshold = 2;
    const auto r = simulate(cfg);
    CHECK(r.histogram.size() == 40 / 2 + 1);
    CHECK(r.max_starvations_observed <= 20);
    cfg.resume_threshold = 0;
    CHECK_THROWS_AS(simulate(cfg), ParameterError);
    cfg.resume_threshold = std::nullopt;
    cfg.replications = 0;
    CHECK_THROWS_AS(simulate(cfg), ParameterError);
}

TEST_CASE("verdicts")
{
    CHECK(check_bin(0.5, 0.5, 100).pass);
    CHECK(check_bin(0.5, 0.5 + 2.99 * 0.05, 100).pass);
    CHECK_FALSE(check_bin(0.5, 0.5 + 3.1 * 0.05, 100).pass);
    CHECK(check_bin(0.0, 0.0, 100).pass);
    CHECK_FALSE(check_bin(0.0, 0.01, 100).pass);
    CHECK_THROWS_AS(check_bin(0.5, 0.5, 0), ParameterError);
}
