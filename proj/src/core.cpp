#include "bufstarv/core.hpp"

#include <cmath>
#include <string>

namespace bufstarv {

namespace {

bool positive_finite(double x)
{
    return std::isfinite(x) && x > 0.0;
}

} // namespace

QueueParams QueueParams::from_rates(double lambda, double mu)
{
    if (!positive_finite(lambda))
        throw ParameterError("arrival rate lambda must be positive and finite");
    if (!positive_finite(mu))
        throw ParameterError("service rate mu must be positive and finite");
    return QueueParams(lambda, mu);
}

QueueParams::QueueParams(double lambda, double mu)
    : lambda_(lambda)
    , mu_(mu)
    , rho_(lambda / mu)
    , p_(lambda / (lambda + mu))
    , q_(1.0 - p_)
{
}

IppParams::IppParams(double alpha_rate, double beta_rate)
    : alpha(alpha_rate)
    , beta(beta_rate)
{
    if (!positive_finite(alpha) || !positive_finite(beta))
        throw ParameterError("IPP transition rates alpha and beta must be positive");
}

SlotParams::SlotParams(double slot_seconds)
    : d(slot_seconds)
{
    if (!positive_finite(d))
        throw ParameterError("slot duration d must be positive");
}

ScenarioSpec::ScenarioSpec(Count file_size, Count threshold, ArrivalModel arrivals)
    : file_size_(file_size)
    , threshold_(threshold)
    , arrivals_(arrivals)
{
    if (file_size_ < 1)
        throw ParameterError("file size N must be at least 1");
    if (threshold_ < 1)
        throw ParameterError("threshold x1 must be at least 1");
    if (threshold_ > file_size_)
        throw ParameterError("threshold x1 must not exceed file size N");
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::BallotExact: return "ballot-exact";
    case Method::BallotGaussian: return "ballot-gaussian";
    case Method::Recursive: return "recursive";
    case Method::Takacs: return "takacs";
    case Method::Ipp: return "ipp";
    }
    return "unknown";
}

double log_binomial_coefficient(Count n, Count k)
{
    if (k < 0 || n < 0 || k > n)
        throw ParameterError("binomial coefficient requires 0 <= k <= n");
    if (k == 0 || k == n)
        return 0.0;
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0)
        - std::lgamma(static_cast<double>(n - k) + 1.0);
}

LogProb log_binomial_pmf(Count n, Count k, double p)
{
    if (k < 0 || n < 0 || k > n)
        throw ParameterError("binomial pmf requires 0 <= k <= n");
    if (!(p >= 0.0 && p <= 1.0))
        throw ParameterError("binomial pmf requires p in [0, 1]");
    // Degenerate endpoints give structural zeros that must stay exact.
    if (p == 0.0)
        return k == 0 ? LogProb::one() : LogProb::zero();
    if (p == 1.0)
        return k == n ? LogProb::one() : LogProb::zero();
    const double q = 1.0 - p;
    return {log_binomial_coefficient(n, k) + static_cast<double>(k) * std::log(p)
            + static_cast<double>(n - k) * std::log(q)};
}

double poisson_pmf(Count k, double m)
{
    if (!(m >= 0.0) || !std::isfinite(m))
        throw ParameterError("Poisson mean must be non-negative and finite");
    if (k < 0)
        throw ParameterError("Poisson count must be non-negative");
    if (m == 0.0)
        return k == 0 ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(m) - m - std::lgamma(kd + 1.0));
}

} // namespace bufstarv
