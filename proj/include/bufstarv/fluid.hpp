#pragma once

#include <limits>
#include <span>
#include <variant>

#include "bufstarv/core.hpp"

// File-level fluid analysis: with deterministic rates the buffer drains at
// mu - lambda once playback starts, so a file starves iff it is longer than
// the no-starvation horizon N_p = x1 mu / (mu - lambda).

namespace bufstarv::fluid {

struct ExponentialSizes {
    double theta;
};

struct ParetoSizes {
    double n_m;
    double upsilon;
};

struct LogNormalSizes {
    double varrho;
    double sigma;
};

using FileSizeDistribution = std::variant<ExponentialSizes, ParetoSizes, LogNormalSizes>;

enum class Family { Exponential, Pareto, LogNormal };

/// Throws ParameterError unless theta > 0, n_m >= 1, upsilon > 1, sigma > 0.
void validate(const FileSizeDistribution& dist);

double mean(const FileSizeDistribution& dist);

/// P(size > x).
double tail(const FileSizeDistribution& dist, double x);

/// Horizon value when mu == lambda: the buffer never drains.
inline constexpr double never = std::numeric_limits<double>::infinity();

class FluidScenario {
public:
    /// Requires lambda >= 0, mu > 0, x1 > 0. mu < lambda is accepted here and
    /// rejected by the operations that need a draining buffer.
    FluidScenario(double lambda, double mu, double threshold);

    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }
    double threshold() const noexcept { return threshold_; }
    /// Start-up delay x1 / lambda.
    double startup_delay() const noexcept { return threshold_ / lambda_; }

private:
    double lambda_;
    double mu_;
    double threshold_;
};

/// N_p = x1 mu / (mu - lambda); `never` when mu == lambda. DomainError for mu < lambda.
double no_starvation_horizon(const FluidScenario& scn);

/// P(N > N_p) for the given file-size law (0 when the horizon is `never`).
double fluid_starvation_probability(const FluidScenario& scn, const FileSizeDistribution& dist);

/// Same, with the empirical tail of observed sizes in place of a closed form.
double empirical_starvation_probability(const FluidScenario& scn, std::span<const double> sizes);

/// Member of `family` with the given mean. `fixed_param` is N_m for Pareto
/// and varrho for log-normal (ignored for exponential).
FileSizeDistribution match_means(double target_mean, Family family, double fixed_param = 0.0);

/// Pareto with the given mean and exponent upsilon (solves for N_m).
ParetoSizes match_pareto_exponent(double target_mean, double upsilon);

/// Log-normal with the given mean and sigma (solves for varrho).
LogNormalSizes match_lognormal_sigma(double target_mean, double sigma);

} // namespace bufstarv::fluid
