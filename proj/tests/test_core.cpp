#include <doctest.h>

#include <cmath>

#include "bufstarv/core.hpp"
#include "support.hpp"

using namespace bufstarv;

TEST_CASE("queue parameters")
{
    const auto a = QueueParams::from_rates(0.95, 1.0);
    CHECK(a.rho() == doctest::Approx(0.95));
    CHECK(a.p() + a.q() == 1.0);
    CHECK(a.p() == doctest::Approx(0.95 / 1.95));

    const auto b = QueueParams::from_rho(1.0);
    CHECK(b.p() == 0.5);
    CHECK(b.q() == 0.5);

    CHECK_THROWS_AS(QueueParams::from_rates(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(QueueParams::from_rates(1.0, -1.0), ParameterError);
    CHECK_THROWS_AS(QueueParams::from_rates(std::nan(""), 1.0), ParameterError);
}

TEST_CASE("scenario validation")
{
    CHECK_NOTHROW(ScenarioSpec(10, 10));
    CHECK(ScenarioSpec(100, 20).max_starvations() == 5);
    CHECK(ScenarioSpec(99, 20).max_starvations() == 4);
    CHECK_THROWS_AS(ScenarioSpec(10, 0), ParameterError);
    CHECK_THROWS_AS(ScenarioSpec(10, 11), ParameterError);
    CHECK_THROWS_AS(ScenarioSpec(0, 0), ParameterError);
    CHECK_THROWS_AS(IppParams(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(SlotParams(-1.0), ParameterError);
}

TEST_CASE("log binomial pmf against exact rational")
{
    const oracle::Rational exact(oracle::binomial(20, 10), oracle::BigInt(1) << 20);
    const double want = std::log(static_cast<double>(exact));
    CHECK(std::abs(log_binomial_pmf(20, 10, 0.5).value - want) < 1e-12);

    // p = 1/4, n = 30: every k against the rational value.
    for (Count k = 0; k <= 30; ++k) {
        const oracle::Rational r = oracle::Rational(oracle::binomial(30, k)) * oracle::power(oracle::Rational(1, 4), k)
            * oracle::power(oracle::Rational(3, 4), 30 - k);
        const double got = log_binomial_pmf(30, k, 0.25).prob();
        CHECK(std::abs(got - static_cast<double>(r)) <= 1e-13 * static_cast<double>(r) + 1e-300);
    }

    CHECK(log_binomial_pmf(5, 0, 0.0).prob() == 1.0);
    CHECK(log_binomial_pmf(5, 1, 0.0).is_zero());
    CHECK(log_binomial_pmf(5, 5, 1.0).prob() == 1.0);
    CHECK_THROWS_AS(log_binomial_pmf(5, 6, 0.5), ParameterError);
    CHECK_THROWS_AS(log_binomial_pmf(5, 2, 1.5), ParameterError);
}

TEST_CASE("binomial pmf sums to one")
{
    for (Count n : {1, 7, 50, 400}) {
        for (double p : {0.1, 0.5, 0.93}) {
            CompensatedSum s;
            for (Count k = 0; k <= n; ++k)
                s += log_binomial_pmf(n, k, p).prob();
            CHECK(std::abs(s.value() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("poisson pmf")
{
    // 3^5 / 5! e^-3, evaluated term by term.
    const double want = (243.0 / 120.0) * std::exp(-3.0);
    CHECK(std::abs(poisson_pmf(5, 3.0) - want) < 1e-15);
    CHECK(poisson_pmf(0, 0.0) == 1.0);
    CHECK(poisson_pmf(3, 0.0) == 0.0);
    CHECK_THROWS_AS(poisson_pmf(1, -1.0), ParameterError);

    CompensatedSum s;
    for (Count k = 0; k < 400; ++k)
        s += poisson_pmf(k, 97.5);
    CHECK(std::abs(s.value() - 1.0) < 1e-12);
}

TEST_CASE("compensated sum keeps small terms")
{
    CompensatedSum s;
    s += 1.0;
    for (int i = 0; i < 1000; ++i)
        s += 1e-17;
    s += -1.0;
    CHECK(s.value() == doctest::Approx(1e-14).epsilon(1e-6));
}
