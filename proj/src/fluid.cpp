#include "bufstarv/fluid.hpp"

#include <cmath>
#include <numbers>

namespace bufstarv::fluid {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double x)
{
    return std::isfinite(x) && x > 0.0;
}

} // namespace

void validate(const FileSizeDistribution& dist)
{
    std::visit(overloaded{
                   [](const ExponentialSizes& d) {
                       if (!positive_finite(d.theta))
                           throw ParameterError("exponential rate theta must be positive");
                   },
                   [](const ParetoSizes& d) {
                       if (!(std::isfinite(d.n_m) && d.n_m >= 1.0))
                           throw ParameterError("Pareto minimum size N_m must be at least 1");
                       if (!(std::isfinite(d.upsilon) && d.upsilon > 1.0))
                           throw ParameterError("Pareto exponent must exceed 1 for a finite mean");
                   },
                   [](const LogNormalSizes& d) {
                       if (!std::isfinite(d.varrho))
                           throw ParameterError("log-normal location must be finite");
                       if (!positive_finite(d.sigma))
                           throw ParameterError("log-normal sigma must be positive");
                   },
               },
               dist);
}

double mean(const FileSizeDistribution& dist)
{
    validate(dist);
    return std::visit(overloaded{
                          [](const ExponentialSizes& d) { return 1.0 / d.theta; },
                          [](const ParetoSizes& d) { return d.upsilon * d.n_m / (d.upsilon - 1.0); },
                          [](const LogNormalSizes& d) { return std::exp(d.varrho + 0.5 * d.sigma * d.sigma); },
                      },
                      dist);
}

double tail(const FileSizeDistribution& dist, double x)
{
    validate(dist);
    if (x == never)
        return 0.0;
    return std::visit(overloaded{
                          [x](const ExponentialSizes& d) { return x <= 0.0 ? 1.0 : std::exp(-d.theta * x); },
                          [x](const ParetoSizes& d) { return x <= d.n_m ? 1.0 : std::pow(d.n_m / x, d.upsilon); },
                          [x](const LogNormalSizes& d) {
                              if (x <= 0.0)
                                  return 1.0;
                              // 1/2 - erf(z)/2 written as erfc(z)/2 to keep the
                              // far tail accurate.
                              return 0.5 * std::erfc((std::log(x) - d.varrho) / (std::numbers::sqrt2 * d.sigma));
                          },
                      },
                      dist);
}

FluidScenario::FluidScenario(double lambda, double mu, double threshold)
    : lambda_(lambda)
    , mu_(mu)
    , threshold_(threshold)
{
    if (!(std::isfinite(lambda_) && lambda_ >= 0.0))
        throw ParameterError("arrival rate lambda must be non-negative and finite");
    if (!positive_finite(mu_))
        throw ParameterError("service rate mu must be positive");
    if (!positive_finite(threshold_))
        throw ParameterError("threshold x1 must be positive");
}

double no_starvation_horizon(const FluidScenario& scn)
{
    if (scn.mu() < scn.lambda())
        throw DomainError("fluid buffer never drains when mu < lambda");
    if (scn.mu() == scn.lambda())
        return never;
    return scn.threshold() * scn.mu() / (scn.mu() - scn.lambda());
}

double fluid_starvation_probability(const FluidScenario& scn, const FileSizeDistribution& dist)
{
    validate(dist);
    return tail(dist, no_starvation_horizon(scn));
}

double empirical_starvation_probability(const FluidScenario& scn, std::span<const double> sizes)
{
    if (sizes.empty())
        throw ParameterError("empirical file-size sample is empty");
    const double horizon = no_starvation_horizon(scn);
    Count above = 0;
    for (double s : sizes) {
        if (!(s > 0.0))
            throw ParameterError("file sizes must be positive");
        if (s > horizon)
            ++above;
    }
    return static_cast<double>(above) / static_cast<double>(sizes.size());
}

FileSizeDistribution match_means(double target_mean, Family family, double fixed_param)
{
    if (!positive_finite(target_mean))
        throw ParameterError("target mean must be positive");
    FileSizeDistribution out = ExponentialSizes{1.0 / target_mean};
    switch (family) {
    case Family::Exponential:
        break;
    case Family::Pareto:
        // upsilon N_m / (upsilon - 1) = M  =>  upsilon = M / (M - N_m)
        if (!(fixed_param >= 1.0 && fixed_param < target_mean))
            throw ParameterError("Pareto mean matching needs 1 <= N_m < mean");
        out = ParetoSizes{fixed_param, target_mean / (target_mean - fixed_param)};
        break;
    case Family::LogNormal: {
        // varrho + sigma^2/2 = ln M, positive root
        const double gap = std::log(target_mean) - fixed_param;
        if (!(gap > 0.0))
            throw ParameterError("log-normal mean matching needs varrho < ln(mean)");
        out = LogNormalSizes{fixed_param, std::sqrt(2.0 * gap)};
        break;
    }
    }
    validate(out);
    return out;
}

ParetoSizes match_pareto_exponent(double target_mean, double upsilon)
{
    if (!positive_finite(target_mean) || !(upsilon > 1.0))
        throw ParameterError("Pareto mean matching needs mean > 0 and upsilon > 1");
    ParetoSizes out{target_mean * (upsilon - 1.0) / upsilon, upsilon};
    validate(out);
    return out;
}

LogNormalSizes match_lognormal_sigma(double target_mean, double sigma)
{
    if (!positive_finite(target_mean) || !positive_finite(sigma))
        throw ParameterError("log-normal mean matching needs mean > 0 and sigma > 0");
    return {std::log(target_mean) - 0.5 * sigma * sigma, sigma};
}

} // namespace bufstarv::fluid
